#include "spectrumlab/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

using nlohmann::json;

std::string to_string(Hierarchy h) {
  switch (h) {
    case Hierarchy::SpaceAirGround: return "space_air_ground";
    case Hierarchy::AirGround: return "air_ground";
    case Hierarchy::UavAided: return "uav_aided";
  }
  return "?";
}

Hierarchy hierarchy_from_string(const std::string& s) {
  if (s == "space_air_ground") return Hierarchy::SpaceAirGround;
  if (s == "air_ground") return Hierarchy::AirGround;
  if (s == "uav_aided") return Hierarchy::UavAided;
  throw ConfigError("unknown hierarchy: " + s);
}

int ScenarioConfig::association_load_cap(int region_users) const {
  int nodes = serving_per_region();
  return (region_users + nodes - 1) / nodes + 2;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& msg) { throw ConfigError(msg); };

  if (beams < 1) fail("beams must be >= 1");
  if (hierarchy == Hierarchy::UavAided) {
    if (haps_per_beam != 0) fail("uav_aided hierarchy requires haps_per_beam == 0");
    if (beams != 1) fail("uav_aided hierarchy requires beams == 1");
  } else if (haps_per_beam < 1) {
    fail(to_string(hierarchy) + " hierarchy requires haps_per_beam >= 1");
  }
  if (regions_per_hap < 1) fail("regions_per_hap must be >= 1");
  if (tbs_per_region < 1) fail("tbs_per_region must be >= 1");
  if (uavs_per_region < 1) fail("uavs_per_region must be >= 1");
  if (users_per_region_range[0] < 1) fail("users_per_region_range.min must be >= 1");
  if (users_per_region_range[0] > users_per_region_range[1])
    fail("users_per_region_range.min must be <= max");
  if (sat_altitude_m <= 0 || hap_altitude_m <= 0 || uav_altitude_m <= 0)
    fail("altitudes must be positive");
  if (carrier_hz <= 0) fail("carrier_hz must be positive");
  if (total_bandwidth_hz <= 0) fail("total_bandwidth_hz must be positive");
  if (chunks < 1 || subbands < 1 || channels_per_subband < 1 || power_levels < 1)
    fail("spectrum grid counts must be >= 1");

  // Bandwidth grid must divide evenly: chunks over the band, then S*C
  // channels inside each chunk.
  long long total = std::llround(total_bandwidth_hz);
  if (std::abs(total_bandwidth_hz - static_cast<double>(total)) > 1e-6)
    fail("total_bandwidth_hz must be an integral number of Hz");
  if (total % chunks != 0) fail("total_bandwidth_hz must be divisible by chunks");
  long long per_chunk = total / chunks;
  if (per_chunk % (static_cast<long long>(subbands) * channels_per_subband) != 0)
    fail("chunk bandwidth must be divisible by subbands*channels_per_subband");

  if (global_period_slots < 1 || regional_period_slots < 1)
    fail("decision periods must be >= 1");
  if (global_period_slots % regional_period_slots != 0)
    fail("global_period_slots must be divisible by regional_period_slots");
  if (slots_per_episode < 1) fail("slots_per_episode must be >= 1");
  if (slots_per_episode % global_period_slots != 0)
    fail("slots_per_episode must be divisible by global_period_slots");

  // NOMA clusters are capped at 4 users and local observations carry at most
  // kMaxUsersPerNodeObs per-user slots; the association load cap must fit both.
  int cap = association_load_cap(users_per_region_range[1]);
  if (cap > defaults::kMaxClusterSize * channels_per_subband)
    fail("association load cap exceeds 4 users per channel across the sub-band");
  if (cap > defaults::kMaxUsersPerNodeObs)
    fail("association load cap exceeds the per-node observation capacity (16)");

  if (fading.rician_m <= 0 || fading.rician_b <= 0 || fading.rician_omega < 0)
    fail("fading parameters out of range (need m > 0, b > 0, omega >= 0)");
}

namespace {

const std::set<std::string> kKnownKeys = {
    "hierarchy", "beams", "haps_per_beam", "regions_per_hap", "tbs_per_region",
    "uavs_per_region", "users_per_region_range", "sat_altitude_m",
    "hap_altitude_m", "uav_altitude_m", "carrier_hz", "total_bandwidth_hz",
    "chunks", "subbands", "channels_per_subband", "power_levels",
    "slots_per_episode", "global_period_slots", "regional_period_slots", "seed",
    "fading", "exhaustive_cap"};

const std::set<std::string> kKnownFadingKeys = {"kind", "rician_b", "rician_m",
                                                "rician_omega"};

template <typename T>
void read_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig scenario_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON parse error: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("scenario JSON must be an object");

  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!kKnownKeys.count(it.key()))
      throw ConfigError("unknown scenario key: " + it.key());
  }

  ScenarioConfig cfg;
  try {
    if (j.contains("hierarchy"))
      cfg.hierarchy = hierarchy_from_string(j.at("hierarchy").get<std::string>());
    read_if(j, "beams", cfg.beams);
    read_if(j, "haps_per_beam", cfg.haps_per_beam);
    read_if(j, "regions_per_hap", cfg.regions_per_hap);
    read_if(j, "tbs_per_region", cfg.tbs_per_region);
    read_if(j, "uavs_per_region", cfg.uavs_per_region);
    if (j.contains("users_per_region_range")) {
      auto arr = j.at("users_per_region_range");
      if (!arr.is_array() || arr.size() != 2)
        throw ConfigError("users_per_region_range must be [min, max]");
      cfg.users_per_region_range = {arr[0].get<int>(), arr[1].get<int>()};
    }
    read_if(j, "sat_altitude_m", cfg.sat_altitude_m);
    read_if(j, "hap_altitude_m", cfg.hap_altitude_m);
    read_if(j, "uav_altitude_m", cfg.uav_altitude_m);
    read_if(j, "carrier_hz", cfg.carrier_hz);
    read_if(j, "total_bandwidth_hz", cfg.total_bandwidth_hz);
    read_if(j, "chunks", cfg.chunks);
    read_if(j, "subbands", cfg.subbands);
    read_if(j, "channels_per_subband", cfg.channels_per_subband);
    read_if(j, "power_levels", cfg.power_levels);
    read_if(j, "slots_per_episode", cfg.slots_per_episode);
    read_if(j, "global_period_slots", cfg.global_period_slots);
    read_if(j, "regional_period_slots", cfg.regional_period_slots);
    read_if(j, "seed", cfg.seed);
    read_if(j, "exhaustive_cap", cfg.exhaustive_cap);
    if (j.contains("fading")) {
      const auto& f = j.at("fading");
      if (!f.is_object()) throw ConfigError("fading must be an object");
      for (auto it = f.begin(); it != f.end(); ++it) {
        if (!kKnownFadingKeys.count(it.key()))
          throw ConfigError("unknown fading key: " + it.key());
      }
      if (f.contains("kind")) {
        std::string k = f.at("kind").get<std::string>();
        if (k == "shadowed_rician")
          cfg.fading.kind = FadingParams::Kind::ShadowedRician;
        else if (k == "rayleigh")
          cfg.fading.kind = FadingParams::Kind::Rayleigh;
        else
          throw ConfigError("unknown fading kind: " + k);
      }
      read_if(f, "rician_b", cfg.fading.rician_b);
      read_if(f, "rician_m", cfg.fading.rician_m);
      read_if(f, "rician_omega", cfg.fading.rician_omega);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON type error: ") + e.what());
  }

  cfg.validate();
  return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return scenario_from_json_text(ss.str());
}

std::string scenario_canonical_json(const ScenarioConfig& cfg) {
  json j;
  j["hierarchy"] = to_string(cfg.hierarchy);
  j["beams"] = cfg.beams;
  j["haps_per_beam"] = cfg.haps_per_beam;
  j["regions_per_hap"] = cfg.regions_per_hap;
  j["tbs_per_region"] = cfg.tbs_per_region;
  j["uavs_per_region"] = cfg.uavs_per_region;
  j["users_per_region_range"] = cfg.users_per_region_range;
  j["sat_altitude_m"] = cfg.sat_altitude_m;
  j["hap_altitude_m"] = cfg.hap_altitude_m;
  j["uav_altitude_m"] = cfg.uav_altitude_m;
  j["carrier_hz"] = cfg.carrier_hz;
  j["total_bandwidth_hz"] = cfg.total_bandwidth_hz;
  j["chunks"] = cfg.chunks;
  j["subbands"] = cfg.subbands;
  j["channels_per_subband"] = cfg.channels_per_subband;
  j["power_levels"] = cfg.power_levels;
  j["slots_per_episode"] = cfg.slots_per_episode;
  j["global_period_slots"] = cfg.global_period_slots;
  j["regional_period_slots"] = cfg.regional_period_slots;
  j["seed"] = cfg.seed;
  j["exhaustive_cap"] = cfg.exhaustive_cap;
  j["fading"] = {
      {"kind", cfg.fading.kind == FadingParams::Kind::ShadowedRician
                   ? "shadowed_rician"
                   : "rayleigh"},
      {"rician_b", cfg.fading.rician_b},
      {"rician_m", cfg.fading.rician_m},
      {"rician_omega", cfg.fading.rician_omega}};
  return j.dump();  // nlohmann objects iterate in sorted key order
}

ScenarioConfig with_hierarchy(const ScenarioConfig& cfg, Hierarchy h) {
  ScenarioConfig out = cfg;
  out.hierarchy = h;
  if (h == Hierarchy::UavAided) {
    out.regions_per_hap = cfg.region_count();
    out.haps_per_beam = 0;
    out.beams = 1;
  } else if (cfg.hierarchy == Hierarchy::UavAided) {
    out.haps_per_beam = 1;
    out.beams = 1;
  }
  out.validate();
  return out;
}

}  // namespace spectrumlab
