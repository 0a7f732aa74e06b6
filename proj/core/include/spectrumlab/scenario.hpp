#pragma once

#include <array>
#include <cstdint>
#include <string>

namespace spectrumlab {

enum class Hierarchy { SpaceAirGround, AirGround, UavAided };

std::string to_string(Hierarchy h);
Hierarchy hierarchy_from_string(const std::string& s);

struct FadingParams {
  enum class Kind { ShadowedRician, Rayleigh };
  Kind kind = Kind::ShadowedRician;
  // Frequent-heavy-shadowing parameterisation; Rayleigh ignores all three.
  double rician_b = 0.063;        // average scattered power (per component)
  double rician_m = 0.739;        // Nakagami shadowing severity
  double rician_omega = 8.97e-4;  // average LOS power
};

// One scenario = one topology + spectrum grid + timescales.  The JSON schema
// uses exactly these field names; unknown keys are rejected.
struct ScenarioConfig {
  Hierarchy hierarchy = Hierarchy::SpaceAirGround;
  int beams = 2;
  int haps_per_beam = 1;  // 0 only for the UAV-aided hierarchy
  int regions_per_hap = 2;
  int tbs_per_region = 2;
  int uavs_per_region = 1;
  std::array<int, 2> users_per_region_range{10, 30};
  double sat_altitude_m = 550e3;
  double hap_altitude_m = 20e3;
  double uav_altitude_m = 100.0;
  double carrier_hz = 28e9;
  double total_bandwidth_hz = 200e6;
  int chunks = 4;                // F
  int subbands = 10;             // S, per chunk
  int channels_per_subband = 5;  // C
  int power_levels = 4;          // P
  int slots_per_episode = 500;
  int global_period_slots = 50;
  int regional_period_slots = 10;
  std::uint64_t seed = 1;

  FadingParams fading{};  // satellite-link fading; terrestrial links are Rayleigh
  std::uint64_t exhaustive_cap = 100000;

  bool has_satellite() const { return hierarchy == Hierarchy::SpaceAirGround; }
  bool has_haps() const { return hierarchy != Hierarchy::UavAided; }
  int hap_count() const { return has_haps() ? beams * haps_per_beam : 0; }
  int region_count() const {
    return has_haps() ? hap_count() * regions_per_hap : regions_per_hap;
  }
  int tbs_count() const { return region_count() * tbs_per_region; }
  int uav_count() const { return region_count() * uavs_per_region; }
  int serving_per_region() const { return tbs_per_region + uavs_per_region; }

  double chunk_bandwidth_hz() const { return total_bandwidth_hz / chunks; }
  double subband_bandwidth_hz() const { return chunk_bandwidth_hz() / subbands; }
  double channel_bandwidth_hz() const {
    return subband_bandwidth_hz() / channels_per_subband;
  }
  int total_channels() const { return chunks * subbands * channels_per_subband; }
  int association_load_cap(int region_users) const;

  // Throws ConfigError when any invariant fails.
  void validate() const;
};

ScenarioConfig scenario_from_json_text(const std::string& text);
ScenarioConfig load_scenario(const std::string& path);

// Sorted-key compact JSON of every field; input to the config hash.
std::string scenario_canonical_json(const ScenarioConfig& cfg);

// Same scenario reduced to another hierarchy (used by the bench command).
// Keeps the total region count; drops tiers that the hierarchy lacks.
ScenarioConfig with_hierarchy(const ScenarioConfig& cfg, Hierarchy h);

}  // namespace spectrumlab
