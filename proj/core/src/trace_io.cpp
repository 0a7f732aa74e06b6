#include "spectrumlab/trace_io.hpp"

#include <cmath>

#include "spectrumlab/manifest.hpp"

namespace spectrumlab {

std::string decisions_csv_header() {
  return "slot,tier,agent,action_index,reward,latency_s";
}

std::string decision_csv_row(const DecisionRecord& rec) {
  return std::to_string(rec.slot) + "," + to_string(rec.tier) + "," +
         std::to_string(rec.agent) + "," + rec.action_index + "," +
         csv_double(rec.reward) + "," + csv_double(rec.latency_s);
}

void write_trace_csvs(const EpisodeTrace& trace, const std::string& dir) {
  CsvWriter metrics(dir + "/metrics.csv", slot_metrics_csv_header());
  for (const SlotMetrics& m : trace.metrics) metrics.row(slot_metrics_csv_row(m));

  CsvWriter decisions(dir + "/decisions.csv", decisions_csv_header());
  for (const DecisionRecord& rec : trace.decisions)
    decisions.row(decision_csv_row(rec));
}

bool traces_equal_ignoring_latency(const EpisodeTrace& a, const EpisodeTrace& b) {
  if (a.metrics.size() != b.metrics.size()) return false;
  if (a.decisions.size() != b.decisions.size()) return false;
  for (size_t i = 0; i < a.metrics.size(); ++i)
    if (slot_metrics_csv_row(a.metrics[i]) != slot_metrics_csv_row(b.metrics[i]))
      return false;
  for (size_t i = 0; i < a.decisions.size(); ++i) {
    const DecisionRecord& x = a.decisions[i];
    const DecisionRecord& y = b.decisions[i];
    if (x.slot != y.slot || x.tier != y.tier || x.agent != y.agent ||
        x.action_index != y.action_index || x.reward != y.reward)
      return false;
  }
  if (a.episode_return != b.episode_return) return false;
  return true;
}

}  // namespace spectrumlab
