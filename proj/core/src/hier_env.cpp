#include "spectrumlab/hier_env.hpp"

#include <algorithm>
#include <cmath>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

namespace d = defaults;

std::string to_string(Tier t) {
  switch (t) {
    case Tier::Global: return "global";
    case Tier::Regional: return "regional";
    case Tier::Local: return "local";
  }
  return "?";
}

namespace {

// Observation scaling constants.
constexpr double kGainDbOffset = 160.0;
constexpr double kGainDbRange = 80.0;
constexpr double kRateObsScale = 1e-8;  // 100 Mbps -> 1.0
constexpr double kInrObsRangeDb = 30.0;

double gain_db_feature(double gain) {
  if (gain <= 0) return 0.0;
  double db = 10.0 * std::log10(gain);
  return std::clamp((db + kGainDbOffset) / kGainDbRange, 0.0, 2.0);
}

double rate_feature(double rate_bps) {
  return std::clamp(rate_bps * kRateObsScale, 0.0, 4.0);
}

}  // namespace

HierEnv::HierEnv(ScenarioConfig cfg, RewardWeights weights)
    : cfg_(std::move(cfg)), weights_(weights) {
  cfg_.validate();
  noise_w_ = thermal_noise_w(cfg_.channel_bandwidth_hz());
}

std::optional<AgentKey> HierEnv::global_agent() const {
  if (!cfg_.has_satellite()) return std::nullopt;
  return AgentKey{Tier::Global, graph_.satellite};
}

std::vector<AgentKey> HierEnv::regional_agents() const {
  std::vector<AgentKey> out;
  for (NodeId h : graph_.haps) out.push_back({Tier::Regional, h});
  return out;
}

std::vector<AgentKey> HierEnv::local_agents() const {
  std::vector<AgentKey> out;
  for (NodeId s : graph_.serving) out.push_back({Tier::Local, s});
  return out;
}

std::vector<AgentKey> HierEnv::all_agents() const {
  std::vector<AgentKey> out;
  if (auto g = global_agent()) out.push_back(*g);
  for (const auto& a : regional_agents()) out.push_back(a);
  for (const auto& a : local_agents()) out.push_back(a);
  return out;
}

const std::vector<NodeId>& HierEnv::users_of(NodeId serving) const {
  static const std::vector<NodeId> kEmpty;
  auto it = users_of_serving_.find(serving);
  return it == users_of_serving_.end() ? kEmpty : it->second;
}

DueTiers HierEnv::due() const {
  DueTiers due;
  due.global = cfg_.has_satellite() && slot_ % cfg_.global_period_slots == 0;
  due.regional = cfg_.has_haps() && slot_ % cfg_.regional_period_slots == 0;
  due.local = true;
  return due;
}

GlobalActionSpace HierEnv::global_space() const {
  return GlobalActionSpace{cfg_.beams, cfg_.chunks};
}

RegionalActionSpace HierEnv::regional_space(NodeId hap) const {
  return RegionalActionSpace{cfg_.subbands, graph_.serving_under_hap(hap)};
}

LocalActionSpace HierEnv::local_space(NodeId serving) const {
  LocalActionSpace space;
  space.channels = cfg_.channels_per_subband;
  space.power_levels = cfg_.power_levels;
  space.users = users_of(serving);
  space.has_move = graph_.node(serving).kind == NodeKind::Uav;
  return space;
}

int HierEnv::global_obs_len() const { return 4 * cfg_.beams; }

int HierEnv::regional_obs_len(NodeId hap) const {
  return 4 * static_cast<int>(graph_.serving_under_hap(hap).size()) + 1;
}

int HierEnv::local_obs_len(NodeId serving) const {
  int len = 4 * d::kMaxUsersPerNodeObs + cfg_.subbands;
  if (graph_.node(serving).kind == NodeKind::Uav) len += 2;
  return len;
}

void HierEnv::reset(std::uint64_t seed) {
  Rng topo_rng = make_rng(seed, 1);
  mobility_rng_ = make_rng(seed, 2);
  fading_rng_ = make_rng(seed, 3);

  graph_ = build_topology(cfg_, topo_rng);
  slot_ = 0;
  trace_ = {};
  last_rates_.assign(graph_.users.size(), 0.0);
  last_interf_w_.assign(graph_.users.size(), 0.0);

  // Default allocation: chunks split evenly and contiguously across beams
  // (remainder to the lower beam ids).
  alloc_ = {};
  alloc_.beam_chunks.assign(static_cast<size_t>(cfg_.beams), {});
  int base = cfg_.chunks / cfg_.beams;
  int extra = cfg_.chunks % cfg_.beams;
  int next = 0;
  for (int b = 0; b < cfg_.beams; ++b) {
    int count = base + (b < extra ? 1 : 0);
    for (int i = 0; i < count; ++i)
      alloc_.beam_chunks[static_cast<size_t>(b)].push_back(next++);
  }

  // Sub-band digit 0 everywhere when a regional tier will immediately decide;
  // without HAPs the digits default to a round-robin spread instead.
  for (size_t rank = 0; rank < graph_.serving.size(); ++rank) {
    NodeId id = graph_.serving[rank];
    int digit = cfg_.has_haps() ? 0 : static_cast<int>(rank) % cfg_.subbands;
    const auto& owned =
        alloc_.beam_chunks[static_cast<size_t>(graph_.node(id).beam_id)];
    alloc_.node_band[id] = resolve_subband_digit(owned, digit, cfg_.subbands);
  }

  realization_ = sample_realization(graph_, cfg_, -1, fading_rng_);
  refresh_association();

  // Channel round-robin per user within its node, power level 1.
  for (const auto& [serving, users] : users_of_serving_) {
    for (size_t k = 0; k < users.size(); ++k) {
      alloc_.user_alloc[users[k]] = {
          static_cast<int>(k) % cfg_.channels_per_subband, 1};
    }
  }
  for (NodeId s : graph_.serving)
    if (graph_.node(s).kind == NodeKind::Uav) alloc_.uav_moves[s] = UavMove::Stay;

  global_acc_ = {};
  regional_acc_ = {};
  global_acc_.beam_se_norm.assign(static_cast<size_t>(cfg_.beams), 0.0);
  global_acc_.beam_violation.assign(static_cast<size_t>(cfg_.beams), 0.0);
  prev_beam_se_norm_.assign(static_cast<size_t>(cfg_.beams), 0.0);
  prev_beam_violation_.assign(static_cast<size_t>(cfg_.beams), 0.0);
  prev_node_tput_.clear();
  prev_node_violation_.clear();
  clamp_acc_.clear();
  pending_decisions_.clear();

  rebuild_observations();
}

void HierEnv::refresh_association() {
  LinkGainTable table;
  table.n_serving = realization_.n_serving;
  table.n_users = realization_.n_users;
  table.gain.resize(static_cast<size_t>(table.n_serving) * table.n_users);
  for (int s = 0; s < table.n_serving; ++s)
    for (int u = 0; u < table.n_users; ++u)
      table.gain[static_cast<size_t>(s) * table.n_users + u] =
          realization_.mean_gain(s, u);

  AssociationResult res = associate_users(graph_, table);
  serving_of_user_ = std::move(res.serving_of_user);
  trace_.degenerate_associations += static_cast<int>(res.degenerate_users.size());

  users_of_serving_.clear();
  for (NodeId s : graph_.serving) users_of_serving_[s] = {};
  for (const auto& [user, serving] : serving_of_user_)
    users_of_serving_[serving].push_back(user);
  for (auto& [s, users] : users_of_serving_) std::sort(users.begin(), users.end());
}

void HierEnv::check_protocol(const TierActions& actions, const DueTiers& due) const {
  if (due.global != actions.global.has_value())
    throw ProtocolError(due.global ? "global action missing at a global slot"
                                   : "global action supplied off-epoch");
  if (due.regional) {
    if (actions.regional.size() != graph_.haps.size())
      throw ProtocolError("regional actions must cover every HAP at a regional slot");
    for (NodeId h : graph_.haps)
      if (!actions.regional.count(h))
        throw ProtocolError("regional action missing for hap " + std::to_string(h));
  } else if (!actions.regional.empty()) {
    throw ProtocolError("regional actions supplied off-epoch");
  }
  if (actions.local.size() != graph_.serving.size())
    throw ProtocolError("local actions must cover every serving node");
  for (NodeId s : graph_.serving)
    if (!actions.local.count(s))
      throw ProtocolError("local action missing for node " + std::to_string(s));
}

void HierEnv::apply_actions(const TierActions& actions, AllocationState& alloc,
                            std::map<AgentKey, int>* clamps) const {
  auto clamp_event = [&](const AgentKey& key) {
    if (clamps) ++(*clamps)[key];
  };

  if (actions.global) {
    // Clamp to a valid composition: nonnegative, summing to F (remainder or
    // deficit absorbed from the last beams up).
    std::vector<int> counts = *actions.global;
    bool changed = false;
    if (static_cast<int>(counts.size()) != cfg_.beams)
      throw ProtocolError("global action needs one chunk count per beam");
    int remaining = cfg_.chunks;
    for (int b = 0; b < cfg_.beams; ++b) {
      int want = counts[static_cast<size_t>(b)];
      int take = std::clamp(want, 0, remaining);
      if (b == cfg_.beams - 1) take = remaining;
      if (take != want) changed = true;
      counts[static_cast<size_t>(b)] = take;
      remaining -= take;
    }
    if (changed) clamp_event({Tier::Global, graph_.satellite});

    alloc.beam_chunks.assign(static_cast<size_t>(cfg_.beams), {});
    int next = 0;
    for (int b = 0; b < cfg_.beams; ++b)
      for (int i = 0; i < counts[static_cast<size_t>(b)]; ++i)
        alloc.beam_chunks[static_cast<size_t>(b)].push_back(next++);

    // Ownership changed: re-resolve every node's sub-band from its digit.
    for (auto& [id, band] : alloc.node_band) {
      const auto& owned =
          alloc.beam_chunks[static_cast<size_t>(graph_.node(id).beam_id)];
      band = resolve_subband_digit(owned, band.digit, cfg_.subbands);
    }
  }

  for (const auto& [hap, digits] : actions.regional) {
    std::vector<NodeId> nodes = graph_.serving_under_hap(hap);
    if (digits.size() != nodes.size())
      throw ProtocolError("regional action for hap " + std::to_string(hap) +
                          " needs one digit per node");
    bool changed = false;
    for (size_t i = 0; i < nodes.size(); ++i) {
      int digit = digits[i];
      int clamped = std::clamp(digit, 0, cfg_.subbands - 1);
      if (clamped != digit) changed = true;
      const auto& owned =
          alloc.beam_chunks[static_cast<size_t>(graph_.node(nodes[i]).beam_id)];
      alloc.node_band[nodes[i]] =
          resolve_subband_digit(owned, clamped, cfg_.subbands);
    }
    if (changed) clamp_event({Tier::Regional, hap});
  }

  for (const auto& [serving, action] : actions.local) {
    const std::vector<NodeId>& users = users_of(serving);
    if (action.per_user.size() != users.size())
      throw ProtocolError("local action for node " + std::to_string(serving) +
                          " needs one entry per user");
    bool changed = false;
    for (size_t i = 0; i < users.size(); ++i) {
      AllocationState::UserAlloc ua = action.per_user[i];
      int ch = std::clamp(ua.channel, 0, cfg_.channels_per_subband - 1);
      int pw = std::clamp(ua.power_level, 1, cfg_.power_levels);
      if (ch != ua.channel || pw != ua.power_level) changed = true;
      alloc.user_alloc[users[i]] = {ch, pw};
    }

    // NOMA clusters are capped at 4 users per channel: surplus members move
    // to the least-loaded channel, weakest mean gain first.
    std::vector<std::vector<NodeId>> by_channel(
        static_cast<size_t>(cfg_.channels_per_subband));
    for (NodeId u : users)
      by_channel[static_cast<size_t>(alloc.user_alloc[u].channel)].push_back(u);
    int spos = graph_.serving_pos(serving);
    for (auto& members : by_channel) {
      if (static_cast<int>(members.size()) <= d::kMaxClusterSize) continue;
      std::sort(members.begin(), members.end(), [&](NodeId a, NodeId b) {
        double ga = realization_.mean_gain(spos, graph_.user_pos(a));
        double gb = realization_.mean_gain(spos, graph_.user_pos(b));
        if (ga != gb) return ga > gb;
        return a < b;
      });
      while (static_cast<int>(members.size()) > d::kMaxClusterSize) {
        NodeId moved = members.back();
        members.pop_back();
        int best = -1;
        for (int c = 0; c < cfg_.channels_per_subband; ++c) {
          auto& dst = by_channel[static_cast<size_t>(c)];
          if (static_cast<int>(dst.size()) >= d::kMaxClusterSize) continue;
          if (best == -1 ||
              dst.size() < by_channel[static_cast<size_t>(best)].size())
            best = c;
        }
        if (best == -1) throw DomainError("cannot satisfy the 4-user cluster cap");
        by_channel[static_cast<size_t>(best)].push_back(moved);
        alloc.user_alloc[moved].channel = best;
        changed = true;
      }
    }
    if (changed) clamp_event({Tier::Local, serving});

    if (graph_.node(serving).kind == NodeKind::Uav)
      alloc.uav_moves[serving] = action.move;
  }
}

HierEnv::RateBreakdown HierEnv::compute_rates(const AllocationState& alloc,
                                              const ChannelRealization& r) const {
  RateBreakdown out;
  out.user_rate.assign(graph_.users.size(), 0.0);
  out.user_interf_w.assign(graph_.users.size(), 0.0);
  out.node_tput.assign(graph_.serving.size(), 0.0);
  out.beam_tput.assign(static_cast<size_t>(cfg_.beams), 0.0);

  // Clusters: users of one node sharing one channel digit.
  std::vector<NomaCluster> clusters;
  for (NodeId s : graph_.serving) {
    auto band_it = alloc.node_band.find(s);
    if (band_it == alloc.node_band.end()) continue;
    int spos = graph_.serving_pos(s);
    std::map<int, std::vector<NodeId>> by_channel;
    for (NodeId u : users_of(s)) {
      auto it = alloc.user_alloc.find(u);
      if (it == alloc.user_alloc.end()) continue;
      by_channel[it->second.channel].push_back(u);
    }
    for (const auto& [digit, members] : by_channel) {
      NomaCluster cluster;
      cluster.serving = s;
      cluster.absolute_channel = absolute_channel_index(
          band_it->second, digit, cfg_.subbands, cfg_.channels_per_subband);
      std::vector<std::pair<NodeId, double>> gains;
      for (NodeId u : members)
        gains.emplace_back(
            u, r.at(spos, graph_.user_pos(u), cluster.absolute_channel));
      std::vector<NodeId> order = sic_order(gains);

      // Default power policy: the multiset of requested levels is assigned
      // inverse to gain so the weakest user holds the largest fraction.
      std::vector<int> levels;
      for (NodeId u : members) levels.push_back(alloc.user_alloc.at(u).power_level);
      std::sort(levels.begin(), levels.end());
      double level_sum = 0;
      for (int l : levels) level_sum += l;
      for (size_t k = 0; k < order.size(); ++k) {
        NomaMember m;
        m.user = order[k];
        m.gain = r.at(spos, graph_.user_pos(order[k]), cluster.absolute_channel);
        m.power_fraction = levels[k] / level_sum;
        cluster.members.push_back(m);
      }
      clusters.push_back(std::move(cluster));
    }
  }

  auto co = aggregate_interference(clusters, r, graph_);

  std::map<NodeId, int> active;
  for (const NomaCluster& c : clusters) ++active[c.serving];

  for (const NomaCluster& c : clusters) {
    const Node& node = graph_.node(c.serving);
    double per_channel_w = node.power_budget_w / active[c.serving];
    auto rows =
        noma_sinr(c, per_channel_w, co, noise_w_, cfg_.channel_bandwidth_hz());
    int spos = graph_.serving_pos(c.serving);
    for (const SinrRow& row : rows) {
      int upos = graph_.user_pos(row.user);
      out.user_rate[static_cast<size_t>(upos)] = row.rate_bps;
      out.user_interf_w[static_cast<size_t>(upos)] =
          row.co_channel_same_tier_w + row.co_channel_cross_tier_w;
      out.node_tput[static_cast<size_t>(spos)] += row.rate_bps;
      out.beam_tput[static_cast<size_t>(graph_.node(row.user).beam_id)] +=
          row.rate_bps;
      out.network_tput += row.rate_bps;
    }
  }
  return out;
}

double HierEnv::global_slot_score(const RateBreakdown& rates) const {
  double e = spectral_efficiency(rates.network_tput, cfg_.total_bandwidth_hz).normalized;
  double f = jain_index(rates.beam_tput);
  double v = qos_violations(rates.user_rate, d::kRMinBps);
  return weights_.w1 * e + weights_.w2 * f - weights_.w3 * v;
}

StepResult HierEnv::step(const TierActions& actions,
                         const std::map<AgentKey, double>& latencies) {
  if (done()) throw ProtocolError("episode is over; call reset");
  DueTiers due_now = due();
  check_protocol(actions, due_now);

  StepResult result;
  apply_actions(actions, alloc_, &result.clamp_events);
  for (const auto& [key, count] : result.clamp_events) clamp_acc_[key] += count;

  // Record applied decisions (rewards are backfilled at epoch close).
  auto record = [&](Tier tier, NodeId agent, std::string index) {
    DecisionRecord rec;
    rec.slot = slot_;
    rec.tier = tier;
    rec.agent = agent;
    rec.action_index = std::move(index);
    auto it = latencies.find({tier, agent});
    if (it != latencies.end()) rec.latency_s = it->second;
    pending_decisions_[{tier, agent}].push_back(trace_.decisions.size());
    trace_.decisions.push_back(std::move(rec));
  };
  if (due_now.global) {
    std::vector<int> counts;
    for (const auto& owned : alloc_.beam_chunks)
      counts.push_back(static_cast<int>(owned.size()));
    record(Tier::Global, graph_.satellite,
           action_index_to_string(global_space().encode(counts)));
  }
  if (due_now.regional) {
    for (NodeId h : graph_.haps) {
      RegionalActionSpace space = regional_space(h);
      std::vector<int> digits;
      for (NodeId n : space.nodes) digits.push_back(alloc_.node_band.at(n).digit);
      record(Tier::Regional, h, action_index_to_string(space.encode(digits)));
    }
  }
  for (NodeId s : graph_.serving) {
    LocalActionSpace space = local_space(s);
    LocalAction applied;
    for (NodeId u : space.users) applied.per_user.push_back(alloc_.user_alloc.at(u));
    if (space.has_move) applied.move = alloc_.uav_moves.at(s);
    record(Tier::Local, s, action_index_to_string(space.encode(applied)));
  }

  // Rates for this slot use the realization the decisions observed (block
  // fading with decision-time CSI); mobility shifts next slot's channel.
  RateBreakdown rates = compute_rates(alloc_, realization_);

  std::map<NodeId, UavMove> moves;
  for (const auto& [serving, action] : actions.local)
    if (graph_.node(serving).kind == NodeKind::Uav) moves[serving] = action.move;
  result.uav_outside_m = step_mobility(graph_, moves, mobility_rng_);

  // Slot metrics (global scope).
  SlotMetrics m;
  m.slot = slot_;
  m.per_user_rate_bps = rates.user_rate;
  m.per_beam_throughput_bps = rates.beam_tput;
  m.network_throughput_bps = rates.network_tput;
  m.spectral_efficiency =
      spectral_efficiency(rates.network_tput, cfg_.total_bandwidth_hz).raw_bits_per_hz;
  m.fairness = jain_index(rates.beam_tput);
  m.violation_fraction = qos_violations(rates.user_rate, d::kRMinBps);
  result.metrics = m;

  // Scope scores.
  result.scores.global_score = global_slot_score(rates);

  for (NodeId h : graph_.haps) {
    std::vector<double> node_tputs;
    std::vector<double> user_rates;
    double tput = 0;
    for (NodeId n : graph_.serving_under_hap(h)) {
      double nt = rates.node_tput[static_cast<size_t>(graph_.serving_pos(n))];
      node_tputs.push_back(nt);
      tput += nt;
      for (NodeId u : users_of(n))
        user_rates.push_back(rates.user_rate[static_cast<size_t>(graph_.user_pos(u))]);
    }
    int beam = graph_.node(h).beam_id;
    double hap_bw = alloc_.beam_chunks[static_cast<size_t>(beam)].size() *
                    cfg_.chunk_bandwidth_hz() / cfg_.haps_per_beam;
    double e = hap_bw > 0
                   ? std::min(tput / hap_bw / d::kSeCapBitsPerHz, 1.0)
                   : 0.0;
    double f = node_tputs.empty() ? 1.0 : jain_index(node_tputs);
    double v = user_rates.empty() ? 0.0 : qos_violations(user_rates, d::kRMinBps);
    result.scores.hap_score[h] = weights_.w1 * e + weights_.w2 * f - weights_.w3 * v;
  }

  for (NodeId s : graph_.serving) {
    double nt = rates.node_tput[static_cast<size_t>(graph_.serving_pos(s))];
    std::vector<double> user_rates;
    for (NodeId u : users_of(s))
      user_rates.push_back(rates.user_rate[static_cast<size_t>(graph_.user_pos(u))]);
    double e = std::min(nt / cfg_.subband_bandwidth_hz() / d::kSeCapBitsPerHz, 1.0);
    double f = user_rates.empty() ? 1.0 : jain_index(user_rates);
    double v = user_rates.empty() ? 0.0 : qos_violations(user_rates, d::kRMinBps);
    double score = weights_.w1 * e + weights_.w2 * f - weights_.w3 * v;
    auto it = result.uav_outside_m.find(s);
    if (it != result.uav_outside_m.end())
      score -= weights_.w4_mobility * (it->second / d::kMobilityPenaltyScaleM);
    result.scores.node_score[s] = score;
  }

  // Epoch accumulation.
  global_acc_.slots += 1;
  global_acc_.global_score += result.scores.global_score;
  for (int b = 0; b < cfg_.beams; ++b) {
    double beam_bw =
        alloc_.beam_chunks[static_cast<size_t>(b)].size() * cfg_.chunk_bandwidth_hz();
    double se = beam_bw > 0 ? std::min(rates.beam_tput[static_cast<size_t>(b)] /
                                           beam_bw / d::kSeCapBitsPerHz,
                                       1.0)
                            : 0.0;
    std::vector<double> beam_user_rates;
    for (NodeId u : graph_.users)
      if (graph_.node(u).beam_id == b)
        beam_user_rates.push_back(
            rates.user_rate[static_cast<size_t>(graph_.user_pos(u))]);
    global_acc_.beam_se_norm[static_cast<size_t>(b)] += se;
    global_acc_.beam_violation[static_cast<size_t>(b)] +=
        beam_user_rates.empty() ? 0.0
                                : qos_violations(beam_user_rates, d::kRMinBps);
  }
  regional_acc_.slots += 1;
  for (const auto& [h, score] : result.scores.hap_score)
    regional_acc_.hap_score[h] += score;
  for (NodeId s : graph_.serving) {
    regional_acc_.node_tput[s] +=
        rates.node_tput[static_cast<size_t>(graph_.serving_pos(s))];
    std::vector<double> user_rates;
    for (NodeId u : users_of(s))
      user_rates.push_back(rates.user_rate[static_cast<size_t>(graph_.user_pos(u))]);
    regional_acc_.node_violation[s] +=
        user_rates.empty() ? 0.0 : qos_violations(user_rates, d::kRMinBps);
  }

  // Epoch closes and reward delivery.
  auto deliver = [&](const AgentKey& key, double reward) {
    result.epoch_rewards[key] = reward;
    trace_.episode_return[key] += reward;
    auto it = pending_decisions_.find(key);
    if (it != pending_decisions_.end()) {
      for (size_t idx : it->second) trace_.decisions[idx].reward = reward;
      it->second.clear();
    }
    clamp_acc_[key] = 0;
  };

  for (NodeId s : graph_.serving) {
    AgentKey key{Tier::Local, s};
    deliver(key, result.scores.node_score.at(s) -
                     d::kClampPenalty * clamp_acc_[key]);
  }
  bool regional_close = (slot_ + 1) % cfg_.regional_period_slots == 0;
  bool global_close = (slot_ + 1) % cfg_.global_period_slots == 0;
  if (regional_close && cfg_.has_haps()) {
    for (NodeId h : graph_.haps) {
      AgentKey key{Tier::Regional, h};
      deliver(key, regional_acc_.hap_score[h] / regional_acc_.slots -
                       d::kClampPenalty * clamp_acc_[key]);
    }
  }
  if (global_close && cfg_.has_satellite()) {
    AgentKey key{Tier::Global, graph_.satellite};
    deliver(key, global_acc_.global_score / global_acc_.slots -
                     d::kClampPenalty * clamp_acc_[key]);
  }

  // Completed-epoch snapshots feeding the next observations.
  if (regional_close) {
    for (NodeId s : graph_.serving) {
      prev_node_tput_[s] = regional_acc_.node_tput[s] / regional_acc_.slots;
      prev_node_violation_[s] = regional_acc_.node_violation[s] / regional_acc_.slots;
    }
    regional_acc_ = {};
  }
  if (global_close) {
    for (int b = 0; b < cfg_.beams; ++b) {
      prev_beam_se_norm_[static_cast<size_t>(b)] =
          global_acc_.beam_se_norm[static_cast<size_t>(b)] / global_acc_.slots;
      prev_beam_violation_[static_cast<size_t>(b)] =
          global_acc_.beam_violation[static_cast<size_t>(b)] / global_acc_.slots;
    }
    global_acc_ = {};
    global_acc_.beam_se_norm.assign(static_cast<size_t>(cfg_.beams), 0.0);
    global_acc_.beam_violation.assign(static_cast<size_t>(cfg_.beams), 0.0);
  }

  last_rates_ = rates.user_rate;
  last_interf_w_ = rates.user_interf_w;
  trace_.metrics.push_back(std::move(m));

  slot_ += 1;
  result.episode_done = done();
  realization_ = sample_realization(graph_, cfg_, slot_, fading_rng_);

  // Association refresh on the regional cadence, effective next slot.
  if (!done() && slot_ % cfg_.regional_period_slots == 0) refresh_association();

  rebuild_observations();
  return result;
}

double HierEnv::score_candidate(const TierActions& actions) const {
  check_protocol(actions, due());
  AllocationState tmp = alloc_;
  apply_actions(actions, tmp, nullptr);
  return global_slot_score(compute_rates(tmp, realization_));
}

void HierEnv::rebuild_observations() {
  obs_ = {};

  if (cfg_.has_satellite()) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(global_obs_len()));
    int regions_per_beam = cfg_.region_count() / cfg_.beams;
    double user_norm =
        static_cast<double>(cfg_.users_per_region_range[1]) * regions_per_beam;
    for (int b = 0; b < cfg_.beams; ++b) {
      int count = 0;
      for (NodeId u : graph_.users)
        if (graph_.node(u).beam_id == b) ++count;
      v.push_back(count / std::max(1.0, user_norm));
      v.push_back(count > 0 ? 1.0 : 0.0);  // mean demand: active-user indicator
      v.push_back(prev_beam_se_norm_[static_cast<size_t>(b)]);
      v.push_back(prev_beam_violation_[static_cast<size_t>(b)]);
    }
    obs_.global = std::move(v);
  }

  for (NodeId h : graph_.haps) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(regional_obs_len(h)));
    for (NodeId n : graph_.serving_under_hap(h)) {
      const std::vector<NodeId>& users = users_of(n);
      int cap = cfg_.association_load_cap(static_cast<int>(
          graph_.users_in_region(graph_.node(n).region_id).size()));
      v.push_back(static_cast<double>(users.size()) / std::max(1, cap));
      double mean_gain = 0;
      for (NodeId u : users)
        mean_gain +=
            realization_.mean_gain(graph_.serving_pos(n), graph_.user_pos(u));
      v.push_back(users.empty() ? 0.0 : gain_db_feature(mean_gain / users.size()));
      auto it = prev_node_tput_.find(n);
      v.push_back(it == prev_node_tput_.end() ? 0.0 : rate_feature(it->second));
      auto iv = prev_node_violation_.find(n);
      v.push_back(iv == prev_node_violation_.end() ? 0.0 : iv->second);
    }
    int beam = graph_.node(h).beam_id;
    v.push_back(static_cast<double>(alloc_.beam_chunks[static_cast<size_t>(beam)].size()) /
                cfg_.chunks);
    obs_.regional[h] = std::move(v);
  }

  for (NodeId s : graph_.serving) {
    std::vector<double> v;
    v.reserve(static_cast<size_t>(local_obs_len(s)));
    const std::vector<NodeId>& users = users_of(s);
    int spos = graph_.serving_pos(s);
    for (int i = 0; i < d::kMaxUsersPerNodeObs; ++i) {
      if (i < static_cast<int>(users.size())) {
        int upos = graph_.user_pos(users[static_cast<size_t>(i)]);
        v.push_back(gain_db_feature(realization_.mean_gain(spos, upos)));
        v.push_back(rate_feature(last_rates_[static_cast<size_t>(upos)]));
        double inr = last_interf_w_[static_cast<size_t>(upos)] / noise_w_;
        v.push_back(std::clamp(std::log10(1.0 + inr) * 10.0 / kInrObsRangeDb, 0.0, 2.0));
        v.push_back(1.0);  // demand flag
      } else {
        v.insert(v.end(), {0.0, 0.0, 0.0, 0.0});
      }
    }
    int digit = alloc_.node_band.at(s).digit;
    for (int i = 0; i < cfg_.subbands; ++i) v.push_back(i == digit ? 1.0 : 0.0);
    const Node& node = graph_.node(s);
    if (node.kind == NodeKind::Uav) {
      const Region& reg = graph_.regions[static_cast<size_t>(node.region_id)];
      v.push_back((node.position[0] - reg.center[0]) / reg.half_extent);
      v.push_back((node.position[1] - reg.center[1]) / reg.half_extent);
    }
    obs_.local[s] = std::move(v);
  }
}

}  // namespace spectrumlab
