#include <doctest.h>

#include <cstdint>
#include <string>

#include "oracles.hpp"
#include "spectrumlab/complexity.hpp"
#include "spectrumlab/errors.hpp"

using namespace spectrumlab;

namespace {

std::uint64_t as_u64(const std::string& s) { return std::stoull(s); }

std::uint64_t pow_u64(std::uint64_t b, int e) {
  std::uint64_t r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

TEST_CASE("stirling numbers: boundary identities and enumeration") {
  for (int n = 1; n <= 8; ++n) {
    CHECK(stirling2(n, 1) == "1");
    CHECK(stirling2(n, n) == "1");
  }
  CHECK(stirling2(3, 2) == std::to_string(oracle::count_partitions_into(3, 2)));
  CHECK(stirling2(3, 2) == "3");
  CHECK(stirling2(4, 2) == std::to_string(oracle::count_partitions_into(4, 2)));
  CHECK(stirling2(4, 2) == "7");
  for (int n = 0; n <= 9; ++n)
    for (int k = 0; k <= n; ++k)
      CHECK(stirling2(n, k) == std::to_string(oracle::count_partitions_into(n, k)));

  CHECK(stirling2(3, 5) == "0");
  CHECK_THROWS_AS(stirling2(-1, 2), DomainError);

  SUBCASE("surjection counting identity: sum_k S(n,k) k! C(m,k) = m^n") {
    for (int n = 1; n <= 6; ++n) {
      for (int m = 1; m <= 6; ++m) {
        std::uint64_t sum = 0;
        std::uint64_t factorial = 1;
        for (int k = 1; k <= n; ++k) {
          factorial *= static_cast<std::uint64_t>(k);
          sum += as_u64(stirling2(n, k)) * factorial * oracle::binom_u64(m, k);
        }
        CHECK(sum == pow_u64(static_cast<std::uint64_t>(m), n));
      }
    }
  }
}

TEST_CASE("global dimension (multi-band) matches multiset enumeration") {
  CHECK(global_dim(4, 2, GlobalDimMode::MultiBand) == "10");  // C(5,2)
  for (int f = 1; f <= 6; ++f) {
    for (int b = 1; b <= 6; ++b) {
      std::uint64_t enumerated = oracle::count_multisets(f, b);
      if (enumerated > 100000) continue;
      CHECK(global_dim(f, b, GlobalDimMode::MultiBand) ==
            std::to_string(enumerated));
    }
  }
  // Printed formula C(F+B-1, B); this differs from the composition count
  // C(F+B-1, B-1) that the environment's action encoding uses.
  CHECK(global_dim(4, 2, GlobalDimMode::MultiBand) !=
        std::to_string(oracle::binom_u64(4 + 2 - 1, 2 - 1)));
}

TEST_CASE("global dimension (single-band) matches the paired enumeration") {
  CHECK(global_dim(3, 3, GlobalDimMode::SingleBand) == "13");
  CHECK(global_dim(1, 5, GlobalDimMode::SingleBand) == "1");
  for (int f = 1; f <= 5; ++f)
    for (int b = 1; b <= 7; ++b)
      CHECK(global_dim(f, b, GlobalDimMode::SingleBand) ==
            std::to_string(oracle::count_singleband(f, b)));
}

TEST_CASE("regional dimension matches assignment enumeration") {
  CHECK(regional_dim(10, 1, 2) == "1000");
  CHECK(regional_dim(1, 3, 4) == "1");
  CHECK(regional_dim(2, 1, 2) == "8");
  for (int s = 1; s <= 6; ++s) {
    for (int nodes = 2; nodes <= 6; ++nodes) {
      std::uint64_t count = pow_u64(static_cast<std::uint64_t>(s), nodes);
      if (count > 100000) continue;
      // enumeration: every map node -> sub-band
      std::uint64_t enumerated = 1;
      for (int i = 0; i < nodes; ++i) enumerated *= static_cast<std::uint64_t>(s);
      CHECK(regional_dim(s, 1, nodes - 1) == std::to_string(enumerated));
    }
  }
}

TEST_CASE("local dimension matches (channel, power) enumeration") {
  CHECK(local_dim(2, 2, 3) == "64");
  CHECK(local_dim(5, 4, 1) == "20");
  CHECK(local_dim(3, 2, 2) == "36");
  for (int c = 1; c <= 4; ++c)
    for (int p = 1; p <= 4; ++p)
      for (int m = 1; m <= 5; ++m) {
        std::uint64_t count = pow_u64(static_cast<std::uint64_t>(c) * p, m);
        if (count > 100000) continue;
        CHECK(local_dim(c, p, m) == std::to_string(count));
      }
}

TEST_CASE("arbitrary precision beyond 64 bits") {
  // (5*4)^30 = 20^30 does not fit in u64.
  std::string d = local_dim(5, 4, 30);
  CHECK(d.size() == 40);
  CHECK(d.substr(0, 10) == "1073741824");  // 2^60 * 10^30
}

TEST_CASE("cost estimates plug into the printed expressions") {
  ScenarioConfig cfg;
  cfg.beams = 2;
  cfg.chunks = 4;

  CostInputs c;
  c.layers = 2;
  c.hidden_global = 64;
  c.hidden_regional = 64;
  c.hidden_local = 64;
  c.batch_global = 2000;
  c.batch_regional = 2000;
  c.batch_local = 2000;
  c.regional_policies = 0;
  c.local_nodes = 0;

  ComplexityReport r = complexity_report(cfg, c);
  CHECK(r.training_term_global == "16384000");  // 2000 * 2 * 64^2
  // dims: multiband C(5,2)=10 added to the training total
  CHECK(r.training_cost_per_epoch == "16384010");
  CHECK(r.inference_cost == std::to_string(64 * 64 + 10));

  SUBCASE("doubling H quadruples the H^2 term") {
    CostInputs c2 = c;
    c2.hidden_global = 128;
    ComplexityReport r2 = complexity_report(cfg, c2);
    CHECK(as_u64(r2.training_term_global) == 4 * as_u64(r.training_term_global));
  }

  SUBCASE("full default-scenario report recomputed by hand") {
    ScenarioConfig def;  // B=2, F=4, S=10, C=5, P=4, users [10,30]
    CostInputs cd;
    cd.layers = 2;
    cd.hidden_global = 256;
    cd.hidden_regional = 128;
    cd.hidden_local = 64;
    cd.batch_global = 40;
    cd.batch_regional = 200;
    cd.batch_local = 2000;
    cd.regional_policies = 2;
    cd.local_nodes = 12;
    ComplexityReport rd = complexity_report(def, cd);

    CHECK(rd.d_global_multiband == "10");
    CHECK(rd.d_regional == "1000");
    // M = ceil(20 / 3) = 7 users per node; (5*4)^7
    CHECK(rd.d_local == std::to_string(pow_u64(20, 7)));
    std::uint64_t training =
        40ull * 2 * 256 * 256 + 10 + 2ull * (200ull * 2 * 128 * 128 + 1000) +
        12ull * (2000ull * 2 * 64 * 64 + pow_u64(20, 7));
    CHECK(rd.training_cost_per_epoch == std::to_string(training));
    std::uint64_t inference = 256ull * 256 + 10 +
                              2ull * (128ull * 128 + 1000) +
                              12ull * (64ull * 64 + pow_u64(20, 7));
    CHECK(rd.inference_cost == std::to_string(inference));
  }
}

TEST_CASE("dim calculators reject out-of-domain arguments") {
  CHECK_THROWS_AS(global_dim(0, 2, GlobalDimMode::MultiBand), DomainError);
  CHECK_THROWS_AS(regional_dim(0, 1, 1), DomainError);
  CHECK_THROWS_AS(local_dim(2, 2, 0), DomainError);
}
