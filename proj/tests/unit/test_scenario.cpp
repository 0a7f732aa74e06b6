#include <doctest.h>

#include "spectrumlab/errors.hpp"
#include "spectrumlab/scenario.hpp"

using namespace spectrumlab;

TEST_CASE("scenario JSON loads with exact field names") {
  ScenarioConfig cfg = scenario_from_json_text(R"({
    "hierarchy": "space_air_ground",
    "beams": 2,
    "haps_per_beam": 1,
    "regions_per_hap": 2,
    "tbs_per_region": 2,
    "uavs_per_region": 1,
    "users_per_region_range": [10, 30],
    "carrier_hz": 28e9,
    "total_bandwidth_hz": 2e8,
    "chunks": 4,
    "subbands": 10,
    "channels_per_subband": 5,
    "power_levels": 4,
    "seed": 9
  })");
  CHECK(cfg.beams == 2);
  CHECK(cfg.hap_count() == 2);
  CHECK(cfg.region_count() == 4);
  CHECK(cfg.tbs_count() == 8);
  CHECK(cfg.uav_count() == 4);
  CHECK(cfg.seed == 9);
  CHECK(cfg.chunk_bandwidth_hz() == doctest::Approx(50e6));
  CHECK(cfg.channel_bandwidth_hz() == doctest::Approx(1e6));
}

TEST_CASE("unknown keys are rejected") {
  CHECK_THROWS_AS(scenario_from_json_text(R"({"beamz": 2})"), ConfigError);
  CHECK_THROWS_AS(scenario_from_json_text(R"({"fading": {"b": 1}})"), ConfigError);
}

TEST_CASE("invariant violations are configuration errors") {
  CHECK_THROWS_AS(scenario_from_json_text(R"({"beams": 0})"), ConfigError);
  CHECK_THROWS_AS(
      scenario_from_json_text(R"({"users_per_region_range": [5, 2]})"),
      ConfigError);
  // global period must be a multiple of the regional period
  CHECK_THROWS_AS(scenario_from_json_text(
                      R"({"global_period_slots": 45, "regional_period_slots": 10})"),
                  ConfigError);
  // chunk bandwidth must split into S*C channels
  CHECK_THROWS_AS(scenario_from_json_text(
                      R"({"total_bandwidth_hz": 2e8, "chunks": 3})"),
                  ConfigError);
  // uav_aided requires no HAPs and a single implicit beam
  CHECK_THROWS_AS(scenario_from_json_text(R"({"hierarchy": "uav_aided"})"),
                  ConfigError);
}

TEST_CASE("fading override") {
  ScenarioConfig cfg = scenario_from_json_text(
      R"({"fading": {"kind": "shadowed_rician", "rician_b": 0.1}})");
  CHECK(cfg.fading.rician_b == doctest::Approx(0.1));
  CHECK(cfg.fading.rician_m == doctest::Approx(0.739));
}

TEST_CASE("canonical JSON is stable and hash-ready") {
  ScenarioConfig a = scenario_from_json_text(R"({"beams": 2, "seed": 5})");
  ScenarioConfig b = scenario_from_json_text(R"({"seed": 5, "beams": 2})");
  CHECK(scenario_canonical_json(a) == scenario_canonical_json(b));
}

TEST_CASE("hierarchy reduction keeps the region count") {
  ScenarioConfig cfg;  // defaults: 4 regions
  ScenarioConfig ua = with_hierarchy(cfg, Hierarchy::UavAided);
  CHECK(ua.region_count() == cfg.region_count());
  CHECK(ua.hap_count() == 0);
  ScenarioConfig ag = with_hierarchy(cfg, Hierarchy::AirGround);
  CHECK(ag.region_count() == cfg.region_count());
  CHECK(ag.hap_count() == cfg.hap_count());
  CHECK_FALSE(ag.has_satellite());
}
