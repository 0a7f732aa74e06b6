#include "spectrumlab/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <thread>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

namespace d = defaults;

TierActions RandomPolicy::decide(const HierEnv& env) {
  TierActions actions;
  DueTiers due = env.due();

  if (due.global) {
    GlobalActionSpace space = env.global_space();
    ActionIndex card = space.cardinality();
    if (card > static_cast<ActionIndex>(UINT64_MAX))
      throw DomainError("global action space too large to sample");
    std::uniform_int_distribution<std::uint64_t> dist(
        0, static_cast<std::uint64_t>(card) - 1);
    actions.global = space.decode(dist(rng_));
  }
  if (due.regional) {
    std::uniform_int_distribution<int> dist(0, env.config().subbands - 1);
    for (const AgentKey& a : env.regional_agents()) {
      RegionalActionSpace space = env.regional_space(a.id);
      std::vector<int> digits(space.nodes.size());
      for (int& digit : digits) digit = dist(rng_);
      actions.regional[a.id] = std::move(digits);
    }
  }
  std::uniform_int_distribution<int> ch(0, env.config().channels_per_subband - 1);
  std::uniform_int_distribution<int> pw(1, env.config().power_levels);
  std::uniform_int_distribution<int> mv(0, kUavMoveCount - 1);
  for (const AgentKey& a : env.local_agents()) {
    LocalActionSpace space = env.local_space(a.id);
    LocalAction act;
    act.per_user.resize(space.users.size());
    for (auto& ua : act.per_user) ua = {ch(rng_), pw(rng_)};
    if (space.has_move) act.move = static_cast<UavMove>(mv(rng_));
    actions.local[a.id] = act;
  }
  return actions;
}

namespace {

// Pre-decoded description of the joint due-action space plus everything the
// fused per-candidate scorer needs.  Built once per decision slot.
struct JointSpace {
  struct NodeInfo {
    NodeId id = kNoNode;
    int serving_pos = 0;
    int beam = 0;
    NodeKind kind = NodeKind::Tbs;
    double budget_w = 0;
    std::vector<int> user_pos;        // positions of its users
    std::vector<double> user_mean_gain;
    std::vector<int> user_beam;
    int first_digit = 0;  // index of its first per-user digit
    int move_digit = -1;  // -1 when not a UAV
  };

  const HierEnv* env = nullptr;
  bool global = false;
  bool regional = false;
  std::vector<std::uint64_t> dims;      // mixed-radix digit sizes
  std::uint64_t joint = 1;

  GlobalActionSpace gspace;
  std::vector<NodeId> haps;
  std::vector<std::vector<NodeId>> hap_nodes;   // per hap, ascending node id
  std::vector<int> regional_digit_of_node;      // node order -> digit slot
  std::vector<NodeInfo> nodes;                  // all serving nodes, ascending
  int total_users = 0;
};

JointSpace build_joint_space(const HierEnv& env) {
  JointSpace js;
  js.env = &env;
  const ScenarioConfig& cfg = env.config();
  DueTiers due = env.due();
  js.global = due.global;
  js.regional = due.regional;

  if (due.global) {
    js.gspace = env.global_space();
    ActionIndex card = js.gspace.cardinality();
    if (card > static_cast<ActionIndex>(UINT64_MAX))
      throw DomainError("global space too large to enumerate");
    js.dims.push_back(static_cast<std::uint64_t>(card));
  }
  if (due.regional) {
    for (const AgentKey& a : env.regional_agents()) {
      js.haps.push_back(a.id);
      RegionalActionSpace space = env.regional_space(a.id);
      js.hap_nodes.push_back(space.nodes);
      for (size_t i = 0; i < space.nodes.size(); ++i)
        js.dims.push_back(static_cast<std::uint64_t>(cfg.subbands));
    }
  }

  const NetworkGraph& graph = env.graph();
  const ChannelRealization& r = env.realization();
  for (const AgentKey& a : env.local_agents()) {
    JointSpace::NodeInfo info;
    info.id = a.id;
    info.serving_pos = graph.serving_pos(a.id);
    const Node& n = graph.node(a.id);
    info.beam = n.beam_id;
    info.kind = n.kind;
    info.budget_w = n.power_budget_w;
    info.first_digit = static_cast<int>(js.dims.size());
    for (NodeId u : env.users_of(a.id)) {
      int upos = graph.user_pos(u);
      info.user_pos.push_back(upos);
      info.user_mean_gain.push_back(r.mean_gain(info.serving_pos, upos));
      info.user_beam.push_back(graph.node(u).beam_id);
      js.dims.push_back(static_cast<std::uint64_t>(cfg.channels_per_subband) *
                        cfg.power_levels);
      ++js.total_users;
    }
    if (n.kind == NodeKind::Uav) {
      info.move_digit = static_cast<int>(js.dims.size());
      js.dims.push_back(kUavMoveCount);
    }
    js.nodes.push_back(std::move(info));
  }

  // Map each regional digit slot to the node order used by the scorer.
  js.regional_digit_of_node.assign(js.nodes.size(), -1);
  if (due.regional) {
    int slot = js.global ? 1 : 0;
    for (size_t h = 0; h < js.haps.size(); ++h) {
      for (NodeId id : js.hap_nodes[h]) {
        for (size_t k = 0; k < js.nodes.size(); ++k)
          if (js.nodes[k].id == id) js.regional_digit_of_node[k] = slot;
        ++slot;
      }
    }
  }
  return js;
}

ActionIndex joint_cardinality_of(const JointSpace& js) {
  ActionIndex joint = 1;
  for (std::uint64_t dim : js.dims) joint *= dim;
  return joint;
}

// Fused immediate-score evaluator over raw digit arrays.  Mirrors
// HierEnv::apply_actions + compute_rates + the global slot score, including
// the 4-user cluster redistribution, so its result matches
// env.score_candidate on every candidate.
class CandidateScorer {
 public:
  explicit CandidateScorer(const JointSpace& js)
      : js_(js), cfg_(js.env->config()), real_(js.env->realization()),
        weights_(js.env->weights()), noise_w_(js.env->noise_w()) {
    user_rate_.resize(static_cast<size_t>(js.total_users));
    beam_tput_.resize(static_cast<size_t>(cfg_.beams));
    base_channel_.resize(js_.nodes.size());
    counts_static_.reserve(static_cast<size_t>(cfg_.beams));
    for (const auto& owned : js.env->allocation().beam_chunks)
      counts_static_.push_back(static_cast<int>(owned.size()));
  }

  double score(const std::uint64_t* digits) {
    // Beam chunk counts (contiguous composition).
    const std::vector<int>* counts = &counts_static_;
    std::vector<int> decoded;
    if (js_.global) {
      decoded = js_.gspace.decode(digits[0]);
      counts = &decoded;
    }
    std::vector<int> beam_start(static_cast<size_t>(cfg_.beams), 0);
    for (int b = 1; b < cfg_.beams; ++b)
      beam_start[static_cast<size_t>(b)] =
          beam_start[static_cast<size_t>(b - 1)] + (*counts)[static_cast<size_t>(b - 1)];

    // Per-node absolute base channel from the sub-band digit.
    const int s_total = cfg_.subbands;
    const int cpsub = cfg_.channels_per_subband;
    for (size_t k = 0; k < js_.nodes.size(); ++k) {
      const auto& node = js_.nodes[k];
      int digit;
      if (js_.regional && js_.regional_digit_of_node[k] >= 0) {
        digit = static_cast<int>(digits[js_.regional_digit_of_node[k]]);
      } else {
        digit = js_.env->allocation().node_band.at(node.id).digit;
      }
      int owned = (*counts)[static_cast<size_t>(node.beam)];
      int pos = digit * owned;
      int chunk = beam_start[static_cast<size_t>(node.beam)] + pos / s_total;
      int sub = pos % s_total;
      base_channel_[k] = (chunk * s_total + sub) * cpsub;
    }

    // Per-node channel digits and power levels (with cluster-cap clamping).
    std::fill(user_rate_.begin(), user_rate_.end(), 0.0);
    std::fill(beam_tput_.begin(), beam_tput_.end(), 0.0);
    double network = 0;
    int violations = 0;

    // First pass: channels and active counts.
    for (size_t k = 0; k < js_.nodes.size(); ++k) {
      NodeScratch& ns = scratch_for(k);
      const auto& node = js_.nodes[k];
      int n_users = static_cast<int>(node.user_pos.size());
      ns.channel.resize(static_cast<size_t>(n_users));
      ns.level.resize(static_cast<size_t>(n_users));
      for (int i = 0; i < n_users; ++i) {
        std::uint64_t digit = digits[node.first_digit + i];
        ns.channel[static_cast<size_t>(i)] =
            static_cast<int>(digit) / cfg_.power_levels;
        ns.level[static_cast<size_t>(i)] =
            static_cast<int>(digit) % cfg_.power_levels + 1;
      }
      clamp_clusters(k, ns);
      ns.active = 0;
      ns.active_mask = 0;
      for (int i = 0; i < n_users; ++i) {
        std::uint64_t bit = 1ull << ns.channel[static_cast<size_t>(i)];
        if (!(ns.active_mask & bit)) {
          ns.active_mask |= bit;
          ++ns.active;
        }
      }
    }

    // Second pass: per-cluster SINR with cross-node interference.
    for (size_t k = 0; k < js_.nodes.size(); ++k) {
      const auto& node = js_.nodes[k];
      NodeScratch& ns = scratch_for(k);
      int n_users = static_cast<int>(node.user_pos.size());
      double per_channel_w = ns.active > 0 ? node.budget_w / ns.active : 0.0;

      for (int c = 0; c < cpsub; ++c) {
        if (!(ns.active_mask & (1ull << c))) continue;
        int abs_channel = base_channel_[k] + c;

        // Cluster members on this channel, ordered by gain desc / id asc.
        member_gain_.clear();
        member_idx_.clear();
        member_level_.clear();
        for (int i = 0; i < n_users; ++i) {
          if (ns.channel[static_cast<size_t>(i)] != c) continue;
          member_idx_.push_back(i);
          member_gain_.push_back(
              real_.at(node.serving_pos, node.user_pos[static_cast<size_t>(i)],
                       abs_channel));
          member_level_.push_back(ns.level[static_cast<size_t>(i)]);
        }
        size_t m = member_idx_.size();
        order_.resize(m);
        for (size_t i = 0; i < m; ++i) order_[i] = i;
        std::sort(order_.begin(), order_.end(), [&](size_t a, size_t b) {
          if (member_gain_[a] != member_gain_[b])
            return member_gain_[a] > member_gain_[b];
          return member_idx_[a] < member_idx_[b];
        });
        std::sort(member_level_.begin(), member_level_.end());
        double level_sum = 0;
        for (int l : member_level_) level_sum += l;

        double stronger_fraction = 0;
        for (size_t rank = 0; rank < m; ++rank) {
          size_t i = order_[rank];
          double gain = member_gain_[i];
          double frac = member_level_[rank] / level_sum;

          // Co-channel interference from other nodes.
          double co = 0;
          for (size_t t = 0; t < js_.nodes.size(); ++t) {
            if (t == k) continue;
            int rel = abs_channel - base_channel_[t];
            if (rel < 0 || rel >= cpsub) continue;
            NodeScratch& ts = scratch_for(t);
            if (!(ts.active_mask & (1ull << rel))) continue;
            double tx_w = js_.nodes[t].budget_w / ts.active;
            co += tx_w * real_.at(js_.nodes[t].serving_pos,
                                  node.user_pos[static_cast<size_t>(
                                      member_idx_[i])],
                                  abs_channel);
          }

          double signal = frac * per_channel_w * gain;
          double denom = stronger_fraction * per_channel_w * gain + co + noise_w_;
          double sinr = signal / denom;
          double rate = cfg_.channel_bandwidth_hz() * std::log2(1.0 + sinr);
          stronger_fraction += frac;

          int global_user = node_user_offset(k) + member_idx_[i];
          user_rate_[static_cast<size_t>(global_user)] = rate;
          beam_tput_[static_cast<size_t>(
              node.user_beam[static_cast<size_t>(member_idx_[i])])] += rate;
          network += rate;
          if (rate < d::kRMinBps) ++violations;
        }
      }
    }

    double e = std::min(network / cfg_.total_bandwidth_hz / d::kSeCapBitsPerHz, 1.0);
    double sum = 0, sum_sq = 0;
    for (double t : beam_tput_) {
      sum += t;
      sum_sq += t * t;
    }
    double f = sum_sq == 0 ? 1.0
                           : sum * sum / (static_cast<double>(beam_tput_.size()) *
                                          sum_sq);
    double v = js_.total_users == 0
                   ? 0.0
                   : static_cast<double>(violations) / js_.total_users;
    return weights_.w1 * e + weights_.w2 * f - weights_.w3 * v;
  }

 private:
  struct NodeScratch {
    std::vector<int> channel;
    std::vector<int> level;
    std::uint64_t active_mask = 0;
    int active = 0;
  };

  NodeScratch& scratch_for(size_t k) {
    if (scratch_.size() != js_.nodes.size()) scratch_.resize(js_.nodes.size());
    return scratch_[k];
  }

  int node_user_offset(size_t k) const {
    int off = 0;
    for (size_t i = 0; i < k; ++i)
      off += static_cast<int>(js_.nodes[i].user_pos.size());
    return off;
  }

  // Same redistribution as HierEnv::apply_actions: clusters over four users
  // shed their weakest mean-gain members to the least-loaded channel.
  void clamp_clusters(size_t k, NodeScratch& ns) {
    const auto& node = js_.nodes[k];
    int n_users = static_cast<int>(node.user_pos.size());
    if (n_users <= d::kMaxClusterSize) return;
    int cpsub = cfg_.channels_per_subband;
    std::vector<std::vector<int>> by_channel(static_cast<size_t>(cpsub));
    for (int i = 0; i < n_users; ++i)
      by_channel[static_cast<size_t>(ns.channel[static_cast<size_t>(i)])]
          .push_back(i);
    for (auto& members : by_channel) {
      if (static_cast<int>(members.size()) <= d::kMaxClusterSize) continue;
      std::sort(members.begin(), members.end(), [&](int a, int b) {
        double ga = node.user_mean_gain[static_cast<size_t>(a)];
        double gb = node.user_mean_gain[static_cast<size_t>(b)];
        if (ga != gb) return ga > gb;
        return node.user_pos[static_cast<size_t>(a)] <
               node.user_pos[static_cast<size_t>(b)];
      });
      while (static_cast<int>(members.size()) > d::kMaxClusterSize) {
        int moved = members.back();
        members.pop_back();
        int best = -1;
        for (int c = 0; c < cpsub; ++c) {
          auto& dst = by_channel[static_cast<size_t>(c)];
          if (static_cast<int>(dst.size()) >= d::kMaxClusterSize) continue;
          if (best == -1 ||
              dst.size() < by_channel[static_cast<size_t>(best)].size())
            best = c;
        }
        if (best == -1) throw DomainError("cannot satisfy the 4-user cluster cap");
        by_channel[static_cast<size_t>(best)].push_back(moved);
        ns.channel[static_cast<size_t>(moved)] = best;
      }
    }
  }

  const JointSpace& js_;
  const ScenarioConfig& cfg_;
  const ChannelRealization& real_;
  const RewardWeights& weights_;
  double noise_w_;

  std::vector<int> counts_static_;
  std::vector<int> base_channel_;
  std::vector<NodeScratch> scratch_;
  std::vector<double> user_rate_;
  std::vector<double> beam_tput_;
  std::vector<double> member_gain_;
  std::vector<int> member_idx_;
  std::vector<int> member_level_;
  std::vector<size_t> order_;
};

struct RangeBest {
  double score = -std::numeric_limits<double>::infinity();
  std::uint64_t index = 0;
};

RangeBest scan_range(const JointSpace& js, std::uint64_t begin, std::uint64_t end) {
  CandidateScorer scorer(js);
  size_t n_digits = js.dims.size();
  std::vector<std::uint64_t> digits(n_digits, 0);
  // Decode `begin` into mixed-radix digits (most significant first).
  std::uint64_t rem = begin;
  for (size_t i = n_digits; i-- > 0;) {
    digits[i] = rem % js.dims[i];
    rem /= js.dims[i];
  }
  RangeBest best;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    double s = scorer.score(digits.data());
    if (s > best.score) {
      best.score = s;
      best.index = idx;
    }
    // Odometer increment.
    for (size_t i = n_digits; i-- > 0;) {
      if (++digits[i] < js.dims[i]) break;
      digits[i] = 0;
    }
  }
  return best;
}

}  // namespace

ActionIndex ExhaustivePolicy::joint_cardinality(const HierEnv& env) {
  return joint_cardinality_of(build_joint_space(env));
}

TierActions ExhaustivePolicy::decide(const HierEnv& env) const {
  JointSpace js = build_joint_space(env);

  ActionIndex joint = joint_cardinality_of(js);
  if (joint > static_cast<ActionIndex>(cap_)) {
    std::string sizing = "joint cardinality " + action_index_to_string(joint) +
                         " exceeds cap " + std::to_string(cap_) + " (dims:";
    for (std::uint64_t dim : js.dims) sizing += " " + std::to_string(dim);
    sizing += ")";
    throw ExhaustiveCapExceeded(sizing);
  }
  std::uint64_t total = static_cast<std::uint64_t>(joint);

  int workers = std::min<int>(threads_, static_cast<int>(std::min<std::uint64_t>(
                                            total, 64)));
  RangeBest best;
  if (workers <= 1 || total < 4096) {
    best = scan_range(js, 0, total);
  } else {
    std::vector<std::future<RangeBest>> futures;
    std::uint64_t chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      std::uint64_t begin = chunk * static_cast<std::uint64_t>(w);
      std::uint64_t end = std::min(total, begin + chunk);
      if (begin >= end) break;
      futures.push_back(std::async(std::launch::async, [&js, begin, end] {
        return scan_range(js, begin, end);
      }));
    }
    for (auto& f : futures) {
      RangeBest rb = f.get();
      if (rb.score > best.score ||
          (rb.score == best.score && rb.index < best.index))
        best = rb;
    }
  }

  // Decode the winning joint index into tier actions.
  std::vector<std::uint64_t> digits(js.dims.size(), 0);
  std::uint64_t rem = best.index;
  for (size_t i = js.dims.size(); i-- > 0;) {
    digits[i] = rem % js.dims[i];
    rem /= js.dims[i];
  }

  TierActions actions;
  if (js.global) actions.global = js.gspace.decode(digits[0]);
  if (js.regional) {
    size_t slot = js.global ? 1 : 0;
    for (size_t h = 0; h < js.haps.size(); ++h) {
      std::vector<int> hd;
      for (size_t i = 0; i < js.hap_nodes[h].size(); ++i)
        hd.push_back(static_cast<int>(digits[slot++]));
      actions.regional[js.haps[h]] = std::move(hd);
    }
  }
  const ScenarioConfig& cfg = env.config();
  for (const auto& node : js.nodes) {
    LocalAction act;
    for (size_t i = 0; i < node.user_pos.size(); ++i) {
      int digit = static_cast<int>(digits[static_cast<size_t>(node.first_digit) + i]);
      act.per_user.push_back(
          {digit / cfg.power_levels, digit % cfg.power_levels + 1});
    }
    if (node.move_digit >= 0)
      act.move = static_cast<UavMove>(static_cast<int>(digits[node.move_digit]));
    actions.local[node.id] = act;
  }
  return actions;
}

}  // namespace spectrumlab
