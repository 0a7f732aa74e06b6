#include <doctest.h>

#include <vector>

#include "spectrumlab/errors.hpp"
#include "spectrumlab/rng.hpp"
#include "spectrumlab/metrics.hpp"

using namespace spectrumlab;

TEST_CASE("spectral efficiency and its normalization cap") {
  auto se = spectral_efficiency(400e6, 200e6);
  CHECK(se.raw_bits_per_hz == doctest::Approx(2.0));
  CHECK(se.normalized == doctest::Approx(0.2));

  auto zero = spectral_efficiency(0.0, 200e6);
  CHECK(zero.raw_bits_per_hz == 0.0);
  CHECK(zero.normalized == 0.0);

  auto capped = spectral_efficiency(3e9, 200e6);
  CHECK(capped.raw_bits_per_hz == doctest::Approx(15.0));
  CHECK(capped.normalized == 1.0);

  CHECK_THROWS_AS(spectral_efficiency(1.0, 0.0), DomainError);
}

TEST_CASE("jain index reference values") {
  std::vector<double> equal{5, 5, 5, 5};
  CHECK(jain_index(equal) == doctest::Approx(1.0));

  std::vector<double> unfair{1, 0, 0, 0};
  CHECK(jain_index(unfair) == doctest::Approx(0.25));

  std::vector<double> mixed{1, 2, 3};
  CHECK(jain_index(mixed) == doctest::Approx(36.0 / 42.0).epsilon(1e-12));

  std::vector<double> zeros{0, 0, 0};
  CHECK(jain_index(zeros) == 1.0);  // vacuous fairness

  CHECK_THROWS_AS(jain_index(std::vector<double>{}), DomainError);
  CHECK_THROWS_AS(jain_index(std::vector<double>{1.0, -0.5}), DomainError);
}

TEST_CASE("jain bounds, equality case and scale invariance") {
  Rng rng = make_rng(55);
  std::uniform_real_distribution<double> value(0.0, 10.0);
  std::uniform_int_distribution<int> len(1, 12);
  std::uniform_real_distribution<double> scale(0.1, 100.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> xs(static_cast<size_t>(len(rng)));
    for (double& x : xs) x = value(rng);
    bool all_zero = true;
    for (double x : xs) all_zero = all_zero && x == 0.0;
    if (all_zero) xs[0] = 1.0;

    double j = jain_index(xs);
    CHECK(j >= 1.0 / static_cast<double>(xs.size()) - 1e-12);
    CHECK(j <= 1.0 + 1e-12);

    std::vector<double> scaled = xs;
    double c = scale(rng);
    for (double& x : scaled) x *= c;
    CHECK(jain_index(scaled) == doctest::Approx(j).epsilon(1e-9));

    std::vector<double> same(xs.size(), 3.7);
    CHECK(jain_index(same) == doctest::Approx(1.0));
  }
}

TEST_CASE("violation fraction") {
  std::vector<double> fine{2e6, 3e6, 5e6};
  CHECK(qos_violations(fine, 1e6) == 0.0);

  std::vector<double> half{0.5e6, 2e6};
  CHECK(qos_violations(half, 1e6) == doctest::Approx(0.5));

  std::vector<double> third{0.9e6, 1.1e6, 2.0e6};
  CHECK(qos_violations(third, 1e6) == doctest::Approx(1.0 / 3.0));

  CHECK_THROWS_AS(qos_violations(fine, -1.0), DomainError);

  SUBCASE("monotone nondecreasing in the rate floor") {
    Rng rng = make_rng(56);
    std::uniform_real_distribution<double> rate(0.0, 10e6);
    std::vector<double> rates(20);
    for (double& r : rates) r = rate(rng);
    double prev = 0;
    for (double r_min = 0; r_min <= 10e6; r_min += 0.5e6) {
      double v = qos_violations(rates, r_min);
      CHECK(v >= prev);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      prev = v;
    }
  }
}

TEST_CASE("slot metrics CSV row format") {
  SlotMetrics m;
  m.slot = 7;
  m.network_throughput_bps = 123456789.0;
  m.spectral_efficiency = 0.617283945;
  m.fairness = 1.0;
  m.violation_fraction = 0.25;
  CHECK(slot_metrics_csv_header() == "slot,throughput_bps,se,fairness,violations");
  CHECK(slot_metrics_csv_row(m) == "7,123456789,0.617283945,1,0.25");
}
