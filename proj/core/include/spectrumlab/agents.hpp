#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectrumlab/baselines.hpp"
#include "spectrumlab/hier_env.hpp"
#include "spectrumlab/rl/ppo.hpp"

namespace spectrumlab {

enum class Algorithm { Hdrl, FlatPpo, IndependentMappo, Random, Exhaustive };
std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);
bool is_learned(Algorithm a);

// Hidden widths per tier.  Higher tiers aggregate more state and own larger
// action spaces, so they run wider trunks by default.
struct TierNetDefaults {
  std::vector<int> global_hidden{256, 256};
  std::vector<int> regional_hidden{128, 128};
  std::vector<int> local_hidden{64, 64};
  std::vector<int> flat_hidden{64, 64};
  bool share_regional_weights = false;
  bool share_local_weights = false;
};

// A policy input/output slice tied to one tier entity.  An hdrl or mappo
// agent holds exactly one fragment; the flat agent holds all of them.
struct Fragment {
  Tier tier = Tier::Local;
  NodeId id = kNoNode;
  int n_heads = 0;
  int obs_len = 0;
};

struct LearnedAgent {
  std::string name;
  std::vector<Fragment> fragments;
  rl::NetSpec spec;
  rl::Mlp net;
  rl::AdamState adam;
  rl::RolloutBuffer buffer;
  long updates = 0;
  // Share group: agents with the same non-negative group id train one net.
  int share_group = -1;

  // Decision awaiting its epoch reward (hdrl protocol).
  bool has_pending = false;
  rl::Transition pending;
};

// What a policy produced for one slot.
struct DecisionOutcome {
  TierActions actions;                            // due tiers only
  std::map<std::string, rl::Transition> computed;  // per agent name
  std::map<AgentKey, double> latencies;           // per applied decision
  double compute_seconds = 0;                     // total across agents
};

class LearnedAgents {
 public:
  static LearnedAgents create(const HierEnv& env, Algorithm algo,
                              const TierNetDefaults& defaults, std::uint64_t seed);

  Algorithm algorithm() const { return algo_; }
  std::vector<LearnedAgent>& agents() { return agents_; }
  const std::vector<LearnedAgent>& agents() const { return agents_; }
  LearnedAgent* find(const std::string& name);

  // Computes this slot's decisions.  hdrl agents act only when due; flat and
  // mappo agents compute every slot while the environment applies only the
  // due components.
  DecisionOutcome decide(const HierEnv& env, bool greedy);

  std::string to_checkpoint_json(const std::string& scenario_hash,
                                 long episodes_trained) const;
  // Throws ConfigError naming the differing observation length when the
  // checkpoint does not fit the environment.
  static LearnedAgents from_checkpoint_json(const std::string& text,
                                            const HierEnv& env);

  void seed_sampler(std::uint64_t seed) { rng_ = make_rng(seed, 17); }

 private:
  Algorithm algo_ = Algorithm::Hdrl;
  std::vector<LearnedAgent> agents_;
  Rng rng_;

  static std::vector<Fragment> fragments_for(const HierEnv& env, Algorithm algo,
                                             const std::string& agent_name);
};

// Per-fragment observation/mask assembly shared by training and evaluation.
std::vector<double> fragment_observation(const HierEnv& env, const Fragment& f);
std::vector<int> fragment_head_sizes(const HierEnv& env, const Fragment& f);
void fragment_mask(const HierEnv& env, const Fragment& f,
                   std::vector<std::uint8_t>& mask_out);
// Folds one fragment's head actions into the tier-action bundle.
void fragment_apply(const HierEnv& env, const Fragment& f,
                    std::span<const int> head_actions, TierActions& out);

}  // namespace spectrumlab
