#pragma once

#include <string>
#include <vector>

#include "spectrumlab/agents.hpp"

namespace spectrumlab {

struct BenchOptions {
  std::vector<Algorithm> algorithms{Algorithm::Random, Algorithm::FlatPpo,
                                    Algorithm::Hdrl, Algorithm::IndependentMappo,
                                    Algorithm::Exhaustive};
  std::vector<Hierarchy> hierarchies{Hierarchy::SpaceAirGround,
                                     Hierarchy::AirGround, Hierarchy::UavAided};
  int episodes = 2;
  int exhaustive_slots = 30;  // exhaustive rows measure over this many slots
  int warmup_decisions = 10;
  std::uint64_t seed = 1;
  std::string out_dir;
  TierNetDefaults net_defaults;
};

struct BenchCell {
  Algorithm algorithm;
  Hierarchy hierarchy;
  double mean_decision_ms = 0;  // per decision slot, warm-up excluded
  long decision_slots = 0;
  bool refused = false;  // exhaustive over its cap
  std::string note;
};

struct BenchResult {
  std::vector<BenchCell> cells;
  std::string table_text;
};

// Per-decision wall time, measured per slot as the total time all control
// nodes spend producing that slot's decisions, averaged across slots
// ("averaging the time taken by each control node to make a decision across
// all steps in an episode").  Learned policies run freshly initialised nets;
// latency depends on shapes, not weights.
BenchResult bench_run(const ScenarioConfig& cfg, const BenchOptions& opt);

}  // namespace spectrumlab
