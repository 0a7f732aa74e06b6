#pragma once

#include <string>

#include "spectrumlab/hier_env.hpp"

namespace spectrumlab {

// Writes metrics.csv (slot, throughput_bps, se, fairness, violations) and
// decisions.csv (slot, tier, agent, action_index, reward, latency_s).
void write_trace_csvs(const EpisodeTrace& trace, const std::string& dir);

std::string decisions_csv_header();
std::string decision_csv_row(const DecisionRecord& rec);

// Trace equality that ignores wall-clock fields (decision latencies).
bool traces_equal_ignoring_latency(const EpisodeTrace& a, const EpisodeTrace& b);

}  // namespace spectrumlab
