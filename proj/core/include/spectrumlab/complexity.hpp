#pragma once

#include <string>

#include "spectrumlab/scenario.hpp"

namespace spectrumlab {

// Exact combinatorics for the tier decision spaces.  All results are exact
// arbitrary-precision integers rendered as decimal strings.

// Stirling numbers of the second kind via S(n,k) = k*S(n-1,k) + S(n-1,k-1).
// k > n yields 0; negative arguments throw DomainError.
std::string stirling2(long long n, long long k);

std::string binomial(long long n, long long k);

enum class GlobalDimMode { MultiBand, SingleBand };

// Multi-band: C(F+B-1, B).  Single-band: sum_k S(B,k) * C(F,k).  Both are the
// printed formulas, kept verbatim even where they differ from the standard
// composition / function counts (the tests document the discrepancy).
std::string global_dim(int chunks_f, int beams_b, GlobalDimMode mode);

// S^(N_u + N_t): one sub-band digit per controlled node.
std::string regional_dim(int subbands_s, int n_uav, int n_tbs);

// (C*P)^M: a channel and power level per associated user.
std::string local_dim(int channels_c, int power_levels_p, int users_m);

struct CostInputs {
  int layers = 2;
  int hidden_global = 64;
  int hidden_regional = 64;
  int hidden_local = 64;
  long long batch_global = 2000;
  long long batch_regional = 2000;
  long long batch_local = 2000;
  int regional_policies = 0;  // R
  int local_nodes = 0;        // N
};

struct ComplexityReport {
  std::string d_global_multiband;
  std::string d_global_singleband;
  std::string d_regional;
  std::string d_local;
  std::string d_total;  // multiband * regional * local

  // Order-of-magnitude cost estimates with all constants set to 1.
  std::string training_term_global;  // B_g * L * H_g^2
  std::string training_cost_per_epoch;
  std::string inference_cost;
};

// Per-epoch training cost B_g L H_g^2 + |D_g| + R (B_r L H_r^2 + |D_r|)
// + N (B_l L H_l^2 + |D_l|) and the forward-only inference analogue.
ComplexityReport complexity_report(const ScenarioConfig& cfg, const CostInputs& c);

std::string complexity_report_text(const ComplexityReport& r);

}  // namespace spectrumlab
