#pragma once

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectrumlab/allocation.hpp"
#include "spectrumlab/channel.hpp"
#include "spectrumlab/metrics.hpp"
#include "spectrumlab/phy.hpp"
#include "spectrumlab/scenario.hpp"
#include "spectrumlab/topology.hpp"

namespace spectrumlab {

enum class Tier { Global, Regional, Local };
std::string to_string(Tier t);

// Eq-style tier reward: w1*E + w2*F - w3*V, with the extra UAV mobility term
// weighted by w4 at the local tier.
struct RewardWeights {
  double w1 = 1.0;
  double w2 = 0.5;
  double w3 = 0.5;
  double w4_mobility = 0.1;
};

struct AgentKey {
  Tier tier = Tier::Local;
  NodeId id = kNoNode;
  auto operator<=>(const AgentKey&) const = default;
};

struct TierActions {
  std::optional<std::vector<int>> global;       // chunk counts per beam
  std::map<NodeId, std::vector<int>> regional;  // hap -> digit per node (id order)
  std::map<NodeId, LocalAction> local;          // serving node -> action
};

struct DueTiers {
  bool global = false;
  bool regional = false;
  bool local = true;
};

struct DecisionRecord {
  int slot = 0;
  Tier tier = Tier::Local;
  NodeId agent = kNoNode;
  std::string action_index;  // flat index of the applied (post-clamp) action
  double reward = 0;         // filled when the decision's epoch closes
  double latency_s = 0;
};

struct EpisodeTrace {
  std::vector<SlotMetrics> metrics;
  std::vector<DecisionRecord> decisions;
  std::map<AgentKey, double> episode_return;
  int degenerate_associations = 0;
};

struct Observations {
  std::optional<std::vector<double>> global;
  std::map<NodeId, std::vector<double>> regional;
  std::map<NodeId, std::vector<double>> local;
};

struct ScopeScores {
  double global_score = 0;
  std::map<NodeId, double> hap_score;
  std::map<NodeId, double> node_score;  // includes the UAV mobility penalty
};

struct StepResult {
  SlotMetrics metrics;
  ScopeScores scores;
  std::map<AgentKey, double> epoch_rewards;  // only tiers whose epoch closed
  std::map<AgentKey, int> clamp_events;      // caused by this slot's actions
  std::map<NodeId, double> uav_outside_m;
  bool episode_done = false;
};

// Three-tier multi-timescale environment.  The satellite re-partitions chunks
// every global period, HAPs re-assign node sub-bands every regional period,
// serving nodes pick per-user channels and power levels every slot.  Invalid
// actions are clamped to the nearest valid value and penalised.
class HierEnv {
 public:
  explicit HierEnv(ScenarioConfig cfg, RewardWeights weights = {});

  void reset(std::uint64_t seed);

  const ScenarioConfig& config() const { return cfg_; }
  const RewardWeights& weights() const { return weights_; }
  const NetworkGraph& graph() const { return graph_; }
  const AllocationState& allocation() const { return alloc_; }
  const std::map<NodeId, NodeId>& association() const { return serving_of_user_; }
  const std::vector<NodeId>& users_of(NodeId serving) const;
  const EpisodeTrace& trace() const { return trace_; }
  const ChannelRealization& realization() const { return realization_; }
  const Observations& observations() const { return obs_; }

  int slot() const { return slot_; }
  bool done() const { return slot_ >= cfg_.slots_per_episode; }
  DueTiers due() const;

  std::optional<AgentKey> global_agent() const;
  std::vector<AgentKey> regional_agents() const;
  std::vector<AgentKey> local_agents() const;
  std::vector<AgentKey> all_agents() const;

  GlobalActionSpace global_space() const;
  RegionalActionSpace regional_space(NodeId hap) const;
  LocalActionSpace local_space(NodeId serving) const;

  // Documented observation lengths.
  int global_obs_len() const;
  int regional_obs_len(NodeId hap) const;
  int local_obs_len(NodeId serving) const;

  StepResult step(const TierActions& actions,
                  const std::map<AgentKey, double>& latencies = {});

  // Immediate global-scope slot score of a candidate action set for the due
  // tiers, evaluated against the frozen decision-time channel realization.
  // Pure: no environment state changes, no penalties.
  double score_candidate(const TierActions& actions) const;

  double noise_w() const { return noise_w_; }

 private:
  struct RateBreakdown {
    std::vector<double> user_rate;      // by user position
    std::vector<double> user_interf_w;  // total co-channel watts
    std::vector<double> node_tput;      // by serving position
    std::vector<double> beam_tput;      // by beam
    double network_tput = 0;
  };

  void apply_actions(const TierActions& actions, AllocationState& alloc,
                     std::map<AgentKey, int>* clamps) const;
  RateBreakdown compute_rates(const AllocationState& alloc,
                              const ChannelRealization& r) const;
  double global_slot_score(const RateBreakdown& rates) const;
  void refresh_association();
  void rebuild_observations();
  void check_protocol(const TierActions& actions, const DueTiers& due) const;

  ScenarioConfig cfg_;
  RewardWeights weights_;
  double noise_w_ = 0;

  NetworkGraph graph_;
  AllocationState alloc_;
  std::map<NodeId, NodeId> serving_of_user_;
  std::map<NodeId, std::vector<NodeId>> users_of_serving_;
  ChannelRealization realization_;  // frozen: what decisions at `slot_` see
  Observations obs_;
  EpisodeTrace trace_;

  Rng mobility_rng_;
  Rng fading_rng_;

  int slot_ = 0;

  // Previous-slot quantities feeding observations.
  std::vector<double> last_rates_;     // by user position
  std::vector<double> last_interf_w_;  // by user position

  // Epoch accumulators and last completed-epoch snapshots.
  struct EpochAcc {
    int slots = 0;
    double global_score = 0;
    std::map<NodeId, double> hap_score;
    std::map<NodeId, double> node_score;
    std::vector<double> beam_se_norm;     // summed per slot
    std::vector<double> beam_violation;   // summed per slot
    std::map<NodeId, double> node_tput;
    std::map<NodeId, double> node_violation;
  };
  EpochAcc global_acc_;
  EpochAcc regional_acc_;
  std::map<AgentKey, int> clamp_acc_;  // within the agent's current epoch
  std::map<AgentKey, std::vector<size_t>> pending_decisions_;

  // Last completed-epoch snapshots (zero before the first close).
  std::vector<double> prev_beam_se_norm_;
  std::vector<double> prev_beam_violation_;
  std::map<NodeId, double> prev_node_tput_;
  std::map<NodeId, double> prev_node_violation_;
};

}  // namespace spectrumlab
