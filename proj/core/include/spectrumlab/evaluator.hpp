#pragma once

#include <string>
#include <vector>

#include "spectrumlab/agents.hpp"

namespace spectrumlab {

struct EvalOptions {
  std::vector<std::uint64_t> seeds{1};
  int episodes = 1;
  int sample_every = 10;  // SlotMetrics sampling cadence
  std::string out_dir;    // empty: no files
  bool write_trace = false;
  int threads = 1;  // parallel seed workers
};

struct SeedSummary {
  std::uint64_t seed = 0;
  double mean_se = 0;  // over the sampled rows
  double mean_throughput_bps = 0;
  double mean_fairness = 0;
  double mean_violations = 0;
  double mean_slot_score = 0;        // over all slots
  double throughput_variance = 0;    // over the sampled rows
  double mean_decision_ms = 0;       // wall-clock; never written to CSVs
};

struct EvalResult {
  std::vector<SeedSummary> seeds;
};

// Greedy evaluation of a trained checkpoint, or a baseline rollout when
// `algo` is random/exhaustive (checkpoint_json empty).  Writes
// metrics_seed<seed>.csv with sampled SlotMetrics rows plus summary.csv when
// out_dir is set.
EvalResult eval_run(const ScenarioConfig& cfg, Algorithm algo,
                    const std::string& checkpoint_json, const EvalOptions& opt);

double median(std::vector<double> values);

}  // namespace spectrumlab
