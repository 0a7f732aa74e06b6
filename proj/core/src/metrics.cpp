#include "spectrumlab/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

SpectralEfficiency spectral_efficiency(double total_throughput_bps,
                                       double total_bandwidth_hz) {
  if (total_bandwidth_hz <= 0)
    throw DomainError("spectral_efficiency: bandwidth must be positive");
  SpectralEfficiency se;
  se.raw_bits_per_hz = total_throughput_bps / total_bandwidth_hz;
  se.normalized = std::min(se.raw_bits_per_hz / defaults::kSeCapBitsPerHz, 1.0);
  return se;
}

double jain_index(std::span<const double> values) {
  if (values.empty()) throw DomainError("jain_index: empty input");
  double sum = 0, sum_sq = 0;
  for (double v : values) {
    if (v < 0) throw DomainError("jain_index: values must be nonnegative");
    sum += v;
    sum_sq += v * v;
  }
  if (sum_sq == 0) return 1.0;  // all-zero: vacuous fairness
  double n = static_cast<double>(values.size());
  return (sum * sum) / (n * sum_sq);
}

double qos_violations(std::span<const double> rates_bps, double r_min_bps) {
  if (r_min_bps < 0) throw DomainError("qos_violations: r_min must be >= 0");
  if (rates_bps.empty()) return 0.0;
  int violating = 0;
  for (double r : rates_bps)
    if (r < r_min_bps) ++violating;
  return static_cast<double>(violating) / static_cast<double>(rates_bps.size());
}

std::string slot_metrics_csv_header() {
  return "slot,throughput_bps,se,fairness,violations";
}

std::string slot_metrics_csv_row(const SlotMetrics& m) {
  char buf[192];
  std::snprintf(buf, sizeof buf, "%d,%.9g,%.9g,%.9g,%.9g", m.slot,
                m.network_throughput_bps, m.spectral_efficiency, m.fairness,
                m.violation_fraction);
  return buf;
}

}  // namespace spectrumlab
