#include <doctest.h>

#include <cmath>
#include <map>

#include "spectrumlab/errors.hpp"
#include "spectrumlab/phy.hpp"

using namespace spectrumlab;

namespace {

// Naive per-user SINR evaluation straight from the definitions.
std::map<NodeId, double> naive_noma_sinr(const NomaCluster& c, double power_w,
                                         const std::map<NodeId, CoChannelInterference>& co,
                                         double noise_w) {
  std::map<NodeId, double> out;
  for (size_t k = 0; k < c.members.size(); ++k) {
    double interference = 0;
    for (size_t j = 0; j < k; ++j)
      interference += c.members[j].power_fraction * power_w * c.members[k].gain;
    auto it = co.find(c.members[k].user);
    if (it != co.end()) interference += it->second.total();
    out[c.members[k].user] =
        c.members[k].power_fraction * power_w * c.members[k].gain /
        (interference + noise_w);
  }
  return out;
}

}  // namespace

TEST_CASE("sic order sorts by descending gain with id tie-break") {
  CHECK(sic_order({{1, 1.0}, {2, 0.25}}) == std::vector<NodeId>{1, 2});
  CHECK(sic_order({{3, 0.5}, {2, 0.5}}) == std::vector<NodeId>{2, 3});
  CHECK(sic_order({{9, 0.1}}) == std::vector<NodeId>{9});
  CHECK_THROWS_AS(sic_order({}), DomainError);
}

TEST_CASE("worked two-user cluster") {
  NomaCluster c;
  c.serving = 100;
  c.absolute_channel = 0;
  c.members = {{1, 0.2, 1.0}, {2, 0.8, 0.25}};
  auto rows = noma_sinr(c, 1.0, {}, 0.1, 1.0);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].user == 1);
  CHECK(rows[0].sinr == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(rows[0].rate_bps == doctest::Approx(std::log2(3.0)).epsilon(1e-12));
  CHECK(rows[1].sinr == doctest::Approx(0.2 / 0.15).epsilon(1e-12));
  CHECK(rows[1].rate_bps ==
        doctest::Approx(std::log2(1.0 + 0.2 / 0.15)).epsilon(1e-9));
}

TEST_CASE("singleton cluster reduces to point-to-point") {
  NomaCluster c;
  c.members = {{5, 1.0, 2e-10}};
  auto rows = noma_sinr(c, 4.0, {}, 1e-12, 1e6);
  CHECK(rows[0].sinr == doctest::Approx(4.0 * 2e-10 / 1e-12));
}

TEST_CASE("zero gain means zero sinr and rate") {
  NomaCluster c;
  c.members = {{1, 0.4, 1.0}, {2, 0.6, 0.0}};
  auto rows = noma_sinr(c, 1.0, {}, 0.1, 1e6);
  CHECK(rows[1].sinr == 0.0);
  CHECK(rows[1].rate_bps == 0.0);
}

TEST_CASE("power fractions must not decrease towards weaker users") {
  NomaCluster c;
  c.members = {{1, 0.8, 1.0}, {2, 0.2, 0.25}};  // stronger user holds more power
  CHECK_THROWS_AS(noma_sinr(c, 1.0, {}, 0.1, 1.0), SicFeasibilityError);
}

TEST_CASE("cluster invariants are enforced") {
  NomaCluster c;
  c.members = {{1, 0.5, 1.0}, {2, 0.6, 0.5}};  // sums to 1.1
  CHECK_THROWS_AS(noma_sinr(c, 1.0, {}, 0.1, 1.0), DomainError);

  NomaCluster big;
  for (int i = 0; i < 5; ++i) big.members.push_back({i, 0.2, 1.0 - 0.1 * i});
  CHECK_THROWS_AS(noma_sinr(big, 1.0, {}, 0.1, 1.0), DomainError);

  NomaCluster ok;
  ok.members = {{1, 0.5, 1.0}, {2, 0.5, 0.5}};
  CHECK_THROWS_AS(noma_sinr(ok, 1.0, {}, 0.0, 1.0), DomainError);  // zero noise
}

TEST_CASE("noma_sinr matches the naive evaluation on random clusters") {
  Rng rng = make_rng(500);
  std::uniform_real_distribution<double> gain_dist(1e-12, 1e-9);
  std::uniform_real_distribution<double> noise_dist(1e-14, 1e-12);
  std::uniform_int_distribution<int> size_dist(1, 4);
  std::uniform_real_distribution<double> co_dist(0.0, 1e-11);
  std::uniform_int_distribution<int> level_dist(1, 4);

  for (int trial = 0; trial < 1000; ++trial) {
    NomaCluster c;
    int n = size_dist(rng);
    std::vector<double> gains;
    for (int i = 0; i < n; ++i) gains.push_back(gain_dist(rng));
    std::sort(gains.rbegin(), gains.rend());
    std::vector<int> levels;
    for (int i = 0; i < n; ++i) levels.push_back(level_dist(rng));
    std::sort(levels.begin(), levels.end());
    double level_sum = 0;
    for (int l : levels) level_sum += l;
    std::map<NodeId, CoChannelInterference> co;
    for (int i = 0; i < n; ++i) {
      c.members.push_back({i, levels[static_cast<size_t>(i)] / level_sum,
                           gains[static_cast<size_t>(i)]});
      co[i] = {co_dist(rng), co_dist(rng)};
    }
    double noise = noise_dist(rng);
    double power = 2.0;

    auto rows = noma_sinr(c, power, co, noise, 1e6);
    auto naive = naive_noma_sinr(c, power, co, noise);
    for (const SinrRow& row : rows) {
      double reference = naive.at(row.user);
      CHECK(std::abs(row.sinr - reference) <=
            1e-9 * std::max(1.0, std::abs(reference)));
    }
  }
}

TEST_CASE("sinr decreases when co-channel interference grows") {
  NomaCluster c;
  c.members = {{1, 0.3, 1e-10}, {2, 0.7, 4e-11}};
  std::map<NodeId, CoChannelInterference> weak{{1, {1e-13, 0}}, {2, {1e-13, 0}}};
  std::map<NodeId, CoChannelInterference> strong{{1, {5e-13, 0}}, {2, {5e-13, 0}}};
  auto a = noma_sinr(c, 1.0, weak, 1e-13, 1e6);
  auto b = noma_sinr(c, 1.0, strong, 1e-13, 1e6);
  for (size_t i = 0; i < a.size(); ++i) CHECK(b[i].sinr < a[i].sinr);
}

TEST_CASE("aggregate interference matches a brute-force double loop") {
  // Small synthetic graph: 3 serving nodes, 6 users, 8 channels.
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
  Rng trng = make_rng(600);
  NetworkGraph g = build_topology(cfg, trng);

  Rng rng = make_rng(601);
  std::uniform_int_distribution<int> ch(0, cfg.total_channels() - 1);

  for (int trial = 0; trial < 200; ++trial) {
    ChannelRealization r = sample_realization(g, cfg, trial, rng);

    // Random clusters: each node gets 2 clusters on random absolute channels
    // with its users split between them.
    std::vector<NomaCluster> clusters;
    std::uniform_int_distribution<int> node_of_user(0, 2);
    std::map<NodeId, std::vector<NodeId>> users_by_node;
    for (NodeId u : g.users)
      users_by_node[g.serving[static_cast<size_t>(node_of_user(rng))]].push_back(u);
    for (const auto& [serving, users] : users_by_node) {
      if (users.empty()) continue;
      int c1 = ch(rng), c2 = ch(rng);
      NomaCluster a, b;
      a.serving = b.serving = serving;
      a.absolute_channel = c1;
      b.absolute_channel = c2 == c1 ? (c1 + 1) % cfg.total_channels() : c2;
      int spos = g.serving_pos(serving);
      for (size_t i = 0; i < users.size(); ++i) {
        NomaCluster& dst = i % 2 == 0 ? a : b;
        dst.members.push_back(
            {users[i], 1.0,
             r.at(spos, g.user_pos(users[i]), dst.absolute_channel)});
      }
      for (NomaCluster* cl : {&a, &b}) {
        if (cl->members.empty()) continue;
        for (auto& m : cl->members) m.power_fraction = 1.0 / cl->members.size();
        std::sort(cl->members.begin(), cl->members.end(),
                  [](const NomaMember& x, const NomaMember& y) {
                    if (x.gain != y.gain) return x.gain > y.gain;
                    return x.user < y.user;
                  });
        // equal fractions always satisfy the ordering
        clusters.push_back(*cl);
      }
    }

    auto got = aggregate_interference(clusters, r, g);

    // Brute force: loop (transmitter, user, channel).
    std::map<NodeId, int> active;
    for (const auto& c : clusters) ++active[c.serving];
    for (const auto& c : clusters) {
      for (const auto& m : c.members) {
        double same = 0, cross = 0;
        for (const auto& other : clusters) {
          if (other.serving == c.serving) continue;
          if (other.absolute_channel != c.absolute_channel) continue;
          const Node& tx = g.node(other.serving);
          double watts = tx.power_budget_w / active[other.serving] *
                         r.at(g.serving_pos(other.serving), g.user_pos(m.user),
                              c.absolute_channel);
          if (tx.kind == g.node(c.serving).kind)
            same += watts;
          else
            cross += watts;
        }
        CHECK(std::abs(got[m.user].same_tier_w - same) <=
              1e-9 * std::max(1.0, same));
        CHECK(std::abs(got[m.user].cross_tier_w - cross) <=
              1e-9 * std::max(1.0, cross));
      }
    }

    // Disjoint channels contribute nothing.
    bool any_shared = false;
    for (const auto& a : clusters)
      for (const auto& b : clusters)
        if (a.serving != b.serving && a.absolute_channel == b.absolute_channel)
          any_shared = true;
    if (!any_shared)
      for (const auto& [user, co] : got) CHECK(co.total() == 0.0);
  }
}

TEST_CASE("capacity formula") {
  CHECK(capacity_bps(1.0, 1.0) == doctest::Approx(1.0));
  CHECK(capacity_bps(20e6, 3.0) == doctest::Approx(40e6));
  CHECK(capacity_bps(5e6, 0.0) == 0.0);
  CHECK_THROWS_AS(capacity_bps(1e6, -0.1), DomainError);
  CHECK_THROWS_AS(capacity_bps(0.0, 1.0), DomainError);
}

TEST_CASE("thermal noise scales with bandwidth") {
  double n1 = thermal_noise_w(1e6);
  double n2 = thermal_noise_w(2e6);
  CHECK(n2 == doctest::Approx(2 * n1));
  // kTB at 290 K with a 7 dB noise figure over 1 MHz
  CHECK(n1 == doctest::Approx(1.380649e-23 * 290.0 * 1e6 *
                              std::pow(10.0, 0.7)));
}
