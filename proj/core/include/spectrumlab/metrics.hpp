#pragma once

#include <span>
#include <string>
#include <vector>

namespace spectrumlab {

struct SpectralEfficiency {
  double raw_bits_per_hz = 0;
  double normalized = 0;  // min(raw / cap, 1)
};

SpectralEfficiency spectral_efficiency(double total_throughput_bps,
                                       double total_bandwidth_hz);

// (sum x)^2 / (n * sum x^2); all-zero input is defined as 1 (vacuous fairness).
double jain_index(std::span<const double> values);

// Fraction of users below the rate floor.
double qos_violations(std::span<const double> rates_bps, double r_min_bps);

struct SlotMetrics {
  int slot = 0;
  std::vector<double> per_user_rate_bps;
  std::vector<double> per_beam_throughput_bps;
  double network_throughput_bps = 0;
  double spectral_efficiency = 0;  // raw, bit/s/Hz over the whole band
  double fairness = 0;             // Jain over per-beam throughputs
  double violation_fraction = 0;
};

// CSV columns: slot, throughput_bps, se, fairness, violations.
std::string slot_metrics_csv_header();
std::string slot_metrics_csv_row(const SlotMetrics& m);

}  // namespace spectrumlab
