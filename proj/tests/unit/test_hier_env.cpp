#include <doctest.h>

#include <cmath>
#include <set>

#include "spectrumlab/baselines.hpp"
#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"
#include "spectrumlab/hier_env.hpp"
#include "spectrumlab/trace_io.hpp"

using namespace spectrumlab;

namespace {

ScenarioConfig micro_config() {
  ScenarioConfig cfg;
  cfg.beams = 1;
  cfg.haps_per_beam = 1;
  cfg.regions_per_hap = 1;
  cfg.tbs_per_region = 2;
  cfg.uavs_per_region = 1;
  cfg.users_per_region_range = {6, 6};
  cfg.chunks = 4;
  cfg.subbands = 4;
  cfg.channels_per_subband = 2;
  cfg.power_levels = 2;
  cfg.slots_per_episode = 200;
  cfg.exhaustive_cap = 2000000;
  return cfg;
}

// Independent containment check over the resolved absolute indices.
bool contained(const HierEnv& env) {
  const ScenarioConfig& cfg = env.config();
  const AllocationState& alloc = env.allocation();

  std::set<int> chunks;
  for (const auto& owned : alloc.beam_chunks)
    for (int c : owned) {
      if (c < 0 || c >= cfg.chunks) return false;
      if (!chunks.insert(c).second) return false;
    }
  if (static_cast<int>(chunks.size()) != cfg.chunks) return false;

  for (const auto& [node, band] : alloc.node_band) {
    int beam = env.graph().node(node).beam_id;
    const auto& owned = alloc.beam_chunks[static_cast<size_t>(beam)];
    if (std::find(owned.begin(), owned.end(), band.chunk) == owned.end())
      return false;
    if (band.subband < 0 || band.subband >= cfg.subbands) return false;
  }
  for (const auto& [user, serving] : env.association()) {
    auto it = alloc.user_alloc.find(user);
    if (it == alloc.user_alloc.end()) return false;
    if (it->second.channel < 0 || it->second.channel >= cfg.channels_per_subband)
      return false;
    if (it->second.power_level < 1 || it->second.power_level > cfg.power_levels)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("reset is deterministic and splits chunks evenly") {
  ScenarioConfig cfg;  // defaults: B=2, F=4
  HierEnv a(cfg), b(cfg);
  a.reset(11);
  b.reset(11);
  CHECK(a.graph().serialize() == b.graph().serialize());
  REQUIRE(a.observations().global.has_value());
  CHECK(*a.observations().global == *b.observations().global);
  CHECK(a.observations().local == b.observations().local);

  CHECK(a.allocation().beam_chunks[0] == std::vector<int>{0, 1});
  CHECK(a.allocation().beam_chunks[1] == std::vector<int>{2, 3});

  HierEnv c(cfg);
  c.reset(12);
  CHECK(a.graph().serialize() != c.graph().serialize());
}

TEST_CASE("observation lengths match the documented formulas") {
  ScenarioConfig cfg;  // defaults
  HierEnv env(cfg);
  env.reset(1);

  CHECK(env.global_obs_len() == 4 * cfg.beams);
  CHECK(static_cast<int>(env.observations().global->size()) ==
        env.global_obs_len());

  for (NodeId hap : env.graph().haps) {
    int nodes = static_cast<int>(env.graph().serving_under_hap(hap).size());
    CHECK(env.regional_obs_len(hap) == 4 * nodes + 1);
    CHECK(static_cast<int>(env.observations().regional.at(hap).size()) ==
          4 * nodes + 1);
  }
  for (NodeId s : env.graph().serving) {
    int expect = 4 * defaults::kMaxUsersPerNodeObs + cfg.subbands;
    if (env.graph().node(s).kind == NodeKind::Uav) expect += 2;
    CHECK(env.local_obs_len(s) == expect);
    CHECK(static_cast<int>(env.observations().local.at(s).size()) == expect);
    for (double v : env.observations().local.at(s)) CHECK(std::isfinite(v));
  }
}

TEST_CASE("validate_hierarchy accepts the reset state and names violators") {
  ScenarioConfig cfg;  // defaults, two beams
  HierEnv env(cfg);
  env.reset(2);

  ValidationReport ok =
      validate_hierarchy(env.allocation(), env.graph(), cfg, env.association());
  CHECK(ok.ok);

  SUBCASE("sub-band in a chunk owned by the other beam") {
    AllocationState bad = env.allocation();
    NodeId node = env.graph().serving[0];
    int beam = env.graph().node(node).beam_id;
    int foreign_beam = beam == 0 ? 1 : 0;
    bad.node_band[node].chunk = bad.beam_chunks[static_cast<size_t>(foreign_beam)][0];
    ValidationReport rep =
        validate_hierarchy(bad, env.graph(), cfg, env.association());
    CHECK_FALSE(rep.ok);
    REQUIRE(rep.violations.size() == 1);
    CHECK(rep.violations[0].tier == "regional");
    CHECK(rep.violations[0].detail.find(std::to_string(node)) != std::string::npos);
  }

  SUBCASE("chunk partition violations are global-tier reports") {
    AllocationState bad = env.allocation();
    bad.beam_chunks[0].push_back(bad.beam_chunks[1][0]);  // duplicate owner
    ValidationReport rep =
        validate_hierarchy(bad, env.graph(), cfg, env.association());
    CHECK_FALSE(rep.ok);
    CHECK(rep.violations[0].tier == "global");
  }

  SUBCASE("out-of-range local digits are local-tier reports") {
    AllocationState bad = env.allocation();
    NodeId user = env.association().begin()->first;
    bad.user_alloc[user].channel = cfg.channels_per_subband;
    ValidationReport rep =
        validate_hierarchy(bad, env.graph(), cfg, env.association());
    CHECK_FALSE(rep.ok);
    CHECK(rep.violations[0].tier == "local");
  }

  SUBCASE("random valid regional digits stay valid; corrupted ones are caught") {
    Rng rng = make_rng(77);
    std::uniform_int_distribution<int> digit(0, cfg.subbands - 1);
    for (int trial = 0; trial < 1000; ++trial) {
      AllocationState alloc = env.allocation();
      for (auto& [node, band] : alloc.node_band) {
        int beam = env.graph().node(node).beam_id;
        band = resolve_subband_digit(alloc.beam_chunks[static_cast<size_t>(beam)],
                                     digit(rng), cfg.subbands);
      }
      CHECK(validate_hierarchy(alloc, env.graph(), cfg, env.association()).ok);

      AllocationState corrupt = alloc;
      auto it = corrupt.node_band.begin();
      std::advance(it, trial % corrupt.node_band.size());
      it->second.chunk = cfg.chunks + 1 + trial % 3;
      CHECK_FALSE(
          validate_hierarchy(corrupt, env.graph(), cfg, env.association()).ok);
    }
  }
}

TEST_CASE("step protocol: due tiers, rewards and epoch bookkeeping") {
  ScenarioConfig cfg = micro_config();
  HierEnv env(cfg);
  env.reset(3);
  RandomPolicy random(4);

  SUBCASE("missing or extra tier actions are protocol errors") {
    TierActions actions = random.decide(env);
    TierActions no_global = actions;
    no_global.global.reset();
    CHECK_THROWS_AS(env.step(no_global), ProtocolError);

    // advance to a non-global slot, then send a global action
    env.reset(3);
    env.step(random.decide(env));
    TierActions extra = random.decide(env);
    extra.global = std::vector<int>{cfg.chunks};
    CHECK_THROWS_AS(env.step(extra), ProtocolError);

    env.reset(3);
    TierActions no_local = random.decide(env);
    no_local.local.erase(no_local.local.begin()->first);
    CHECK_THROWS_AS(env.step(no_local), ProtocolError);
  }

  SUBCASE("epoch record counts for a full episode") {
    env.reset(5);
    int global_decisions = 0, regional_decisions = 0, local_decisions = 0;
    while (!env.done()) env.step(random.decide(env));
    for (const DecisionRecord& rec : env.trace().decisions) {
      switch (rec.tier) {
        case Tier::Global:
          ++global_decisions;
          CHECK(rec.slot % cfg.global_period_slots == 0);
          break;
        case Tier::Regional:
          ++regional_decisions;
          CHECK(rec.slot % cfg.regional_period_slots == 0);
          break;
        case Tier::Local: ++local_decisions; break;
      }
    }
    // 200 slots: 4 global, 20 regional (1 hap), 200 x 3 local.
    CHECK(global_decisions == cfg.slots_per_episode / cfg.global_period_slots);
    CHECK(regional_decisions == cfg.slots_per_episode / cfg.regional_period_slots);
    CHECK(local_decisions == cfg.slots_per_episode * 3);
    CHECK(env.trace().metrics.size() ==
          static_cast<size_t>(cfg.slots_per_episode));
  }

  SUBCASE("rewards only appear when an epoch closes") {
    env.reset(6);
    StepResult r0 = env.step(random.decide(env));  // slot 0
    // local epochs close every slot; regional/global stay open
    for (const auto& [key, reward] : r0.epoch_rewards)
      CHECK(key.tier == Tier::Local);

    for (int t = 1; t < cfg.regional_period_slots; ++t) {
      StepResult r = env.step(random.decide(env));
      if (t < cfg.regional_period_slots - 1) {
        for (const auto& [key, reward] : r.epoch_rewards)
          CHECK(key.tier == Tier::Local);
      } else {
        bool saw_regional = false;
        for (const auto& [key, reward] : r.epoch_rewards)
          saw_regional = saw_regional || key.tier == Tier::Regional;
        CHECK(saw_regional);
      }
    }
  }
}

TEST_CASE("tier reward arithmetic matches the weighted form") {
  // E=0.8, F=0.9, V=0.1 with weights (1.0, 0.5, 0.5): 0.8 + 0.45 - 0.05 = 1.2.
  RewardWeights w;
  double reward = w.w1 * 0.8 + w.w2 * 0.9 - w.w3 * 0.1;
  CHECK(reward == doctest::Approx(1.2));

  // UAV 50 m outside with w4 = 0.1 subtracts 0.05.
  CHECK(w.w4_mobility * (50.0 / 100.0) == doctest::Approx(0.05));

  // Reward bounds: scores live in [-w3 - w4*pen - clamp, w1 + w2].
  ScenarioConfig cfg = micro_config();
  HierEnv env(cfg);
  env.reset(7);
  RandomPolicy random(8);
  double max_outside = 0;
  while (!env.done()) {
    StepResult res = env.step(random.decide(env));
    for (const auto& [id, d] : res.uav_outside_m)
      max_outside = std::max(max_outside, d);
    for (const auto& [key, reward] : res.epoch_rewards) {
      CHECK(reward <= 1.5 + 1e-9);
      CHECK(reward >= -0.5 - 0.1 * (max_outside / 100.0) - 0.1 * 64 - 1e-9);
    }
    CHECK(res.scores.global_score <= 1.5);
    CHECK(res.scores.global_score >= -0.5);
  }
}

TEST_CASE("containment holds after every step under random actions") {
  ScenarioConfig cfg = micro_config();
  HierEnv env(cfg);
  env.reset(9);
  RandomPolicy random(10);
  while (!env.done()) {
    env.step(random.decide(env));
    CHECK(contained(env));
    ValidationReport rep =
        validate_hierarchy(env.allocation(), env.graph(), cfg, env.association());
    CHECK(rep.ok);
  }
}

TEST_CASE("full-episode determinism of the trace") {
  ScenarioConfig cfg = micro_config();
  auto run = [&](std::uint64_t seed) {
    HierEnv env(cfg);
    env.reset(seed);
    RandomPolicy random(seed + 1);
    while (!env.done()) env.step(random.decide(env));
    return env.trace();
  };
  EpisodeTrace a = run(20);
  EpisodeTrace b = run(20);
  CHECK(traces_equal_ignoring_latency(a, b));
  EpisodeTrace c = run(21);
  CHECK_FALSE(traces_equal_ignoring_latency(a, c));
}

TEST_CASE("invalid actions are clamped with a penalty") {
  ScenarioConfig cfg = micro_config();
  HierEnv env(cfg);
  env.reset(30);
  RandomPolicy random(31);

  TierActions actions = random.decide(env);
  // Corrupt the composition: sums beyond F get clamped.
  actions.global = std::vector<int>{cfg.chunks + 3};
  for (auto& [node, act] : actions.local) {
    for (auto& ua : act.per_user) ua.channel = cfg.channels_per_subband + 5;
    break;
  }
  StepResult res = env.step(actions);
  CHECK(res.clamp_events.size() >= 1);
  CHECK(contained(env));

  bool clamped_local = false;
  for (const auto& [key, count] : res.clamp_events)
    clamped_local = clamped_local || key.tier == Tier::Local;
  CHECK(clamped_local);
}

TEST_CASE("interference-free power monotonicity") {
  // With every node on its own chunk and each user alone on a channel,
  // raising one user's power level never lowers that user's rate.
  ScenarioConfig cfg = micro_config();
  cfg.users_per_region_range = {4, 4};  // 2+1+1 across 3 nodes at most

  auto run_with_level = [&](int level) {
    HierEnv env(cfg);
    env.reset(40);
    TierActions actions;
    actions.global = std::vector<int>{cfg.chunks};
    for (const AgentKey& a : env.regional_agents()) {
      RegionalActionSpace space = env.regional_space(a.id);
      std::vector<int> digits;
      for (size_t i = 0; i < space.nodes.size(); ++i)
        digits.push_back(static_cast<int>(i));  // distinct sub-bands
      actions.regional[a.id] = digits;
    }
    for (const AgentKey& a : env.local_agents()) {
      LocalActionSpace space = env.local_space(a.id);
      LocalAction act;
      for (size_t i = 0; i < space.users.size(); ++i)
        act.per_user.push_back({static_cast<int>(i) % cfg.channels_per_subband,
                                level});
      actions.local[a.id] = act;
    }
    StepResult res = env.step(actions);
    return res.metrics.per_user_rate_bps;
  };

  auto low = run_with_level(1);
  auto high = run_with_level(cfg.power_levels);
  REQUIRE(low.size() == high.size());
  for (size_t i = 0; i < low.size(); ++i) CHECK(high[i] >= low[i] - 1e-6);
}

TEST_CASE("score_candidate matches applying the actions on the frozen channel") {
  ScenarioConfig cfg = micro_config();
  HierEnv env(cfg);
  env.reset(50);
  RandomPolicy random(51);

  for (int trial = 0; trial < 20; ++trial) {
    TierActions actions = random.decide(env);
    double predicted = env.score_candidate(actions);
    CHECK(std::isfinite(predicted));
    CHECK(predicted <= 1.5);
    env.step(actions);
  }
}

TEST_CASE("air-ground and uav-aided hierarchies have fewer due tiers") {
  ScenarioConfig cfg = micro_config();
  ScenarioConfig ag = with_hierarchy(cfg, Hierarchy::AirGround);
  HierEnv env_ag(ag);
  env_ag.reset(60);
  CHECK_FALSE(env_ag.due().global);
  CHECK(env_ag.due().regional);
  CHECK_FALSE(env_ag.global_agent().has_value());

  ScenarioConfig ua = with_hierarchy(cfg, Hierarchy::UavAided);
  HierEnv env_ua(ua);
  env_ua.reset(61);
  CHECK_FALSE(env_ua.due().regional);
  CHECK(env_ua.regional_agents().empty());
  CHECK(env_ua.local_agents().size() == 3);

  // Without a regional tier the reset spreads node sub-bands round-robin.
  std::set<int> digits;
  for (const auto& [node, band] : env_ua.allocation().node_band)
    digits.insert(band.digit);
  CHECK(digits.size() == 3);

  RandomPolicy random(62);
  while (!env_ua.done()) env_ua.step(random.decide(env_ua));
  CHECK(env_ua.trace().metrics.size() == static_cast<size_t>(ua.slots_per_episode));
}
