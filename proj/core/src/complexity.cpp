#include "spectrumlab/complexity.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gmpxx.h>

#include "spectrumlab/errors.hpp"

namespace spectrumlab {

namespace {

mpz_class stirling2_mpz(long long n, long long k) {
  if (n < 0 || k < 0) throw DomainError("stirling2: arguments must be nonnegative");
  if (k > n) return 0;
  if (n == 0) return 1;  // S(0,0) = 1
  if (k == 0) return 0;
  // Rolling row of the recurrence.
  std::vector<mpz_class> row(static_cast<size_t>(k) + 1, 0);
  row[0] = 1;  // S(0,0)
  for (long long i = 1; i <= n; ++i) {
    long long jmax = std::min<long long>(i, k);
    for (long long j = jmax; j >= 1; --j)
      row[static_cast<size_t>(j)] =
          mpz_class(static_cast<long>(j)) * row[static_cast<size_t>(j)] + row[static_cast<size_t>(j - 1)];
    row[0] = 0;  // S(i,0) = 0 for i >= 1
  }
  return row[static_cast<size_t>(k)];
}

mpz_class binomial_mpz(long long n, long long k) {
  if (n < 0 || k < 0) throw DomainError("binomial: arguments must be nonnegative");
  if (k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return out;
}

mpz_class pow_mpz(long long base, long long exp) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), static_cast<unsigned long>(base),
                static_cast<unsigned long>(exp));
  return out;
}

mpz_class global_dim_mpz(int f, int b, GlobalDimMode mode) {
  if (f < 1 || b < 1) throw DomainError("global_dim: F and B must be >= 1");
  if (mode == GlobalDimMode::MultiBand) return binomial_mpz(f + b - 1, b);
  mpz_class sum = 0;
  for (int k = 1; k <= std::min(f, b); ++k)
    sum += stirling2_mpz(b, k) * binomial_mpz(f, k);
  return sum;
}

}  // namespace

std::string stirling2(long long n, long long k) {
  return stirling2_mpz(n, k).get_str();
}

std::string binomial(long long n, long long k) {
  return binomial_mpz(n, k).get_str();
}

std::string global_dim(int chunks_f, int beams_b, GlobalDimMode mode) {
  return global_dim_mpz(chunks_f, beams_b, mode).get_str();
}

std::string regional_dim(int subbands_s, int n_uav, int n_tbs) {
  if (subbands_s < 1 || n_uav < 1 || n_tbs < 1)
    throw DomainError("regional_dim: arguments must be >= 1");
  return pow_mpz(subbands_s, n_uav + n_tbs).get_str();
}

std::string local_dim(int channels_c, int power_levels_p, int users_m) {
  if (channels_c < 1 || power_levels_p < 1 || users_m < 1)
    throw DomainError("local_dim: arguments must be >= 1");
  return pow_mpz(static_cast<long long>(channels_c) * power_levels_p, users_m)
      .get_str();
}

ComplexityReport complexity_report(const ScenarioConfig& cfg, const CostInputs& c) {
  ComplexityReport r;

  mpz_class d_g_multi = global_dim_mpz(cfg.chunks, cfg.beams, GlobalDimMode::MultiBand);
  mpz_class d_g_single =
      global_dim_mpz(cfg.chunks, cfg.beams, GlobalDimMode::SingleBand);
  mpz_class d_r =
      pow_mpz(cfg.subbands, cfg.uavs_per_region + cfg.tbs_per_region);

  // M: expected users per serving node, rounded up.
  double mean_users =
      0.5 * (cfg.users_per_region_range[0] + cfg.users_per_region_range[1]);
  int m = std::max(
      1, static_cast<int>(std::ceil(mean_users / cfg.serving_per_region())));
  mpz_class d_l =
      pow_mpz(static_cast<long long>(cfg.channels_per_subband) * cfg.power_levels, m);

  r.d_global_multiband = d_g_multi.get_str();
  r.d_global_singleband = d_g_single.get_str();
  r.d_regional = d_r.get_str();
  r.d_local = d_l.get_str();
  r.d_total = mpz_class(d_g_multi * d_r * d_l).get_str();

  mpz_class hg2 = mpz_class(c.hidden_global) * c.hidden_global;
  mpz_class hr2 = mpz_class(c.hidden_regional) * c.hidden_regional;
  mpz_class hl2 = mpz_class(c.hidden_local) * c.hidden_local;

  mpz_class term_g = mpz_class(static_cast<long>(c.batch_global)) * c.layers * hg2;
  mpz_class term_r = mpz_class(static_cast<long>(c.batch_regional)) * c.layers * hr2;
  mpz_class term_l = mpz_class(static_cast<long>(c.batch_local)) * c.layers * hl2;

  mpz_class training = term_g + d_g_multi + c.regional_policies * (term_r + d_r) +
                       c.local_nodes * (term_l + d_l);
  mpz_class inference = hg2 + d_g_multi + c.regional_policies * (hr2 + d_r) +
                        c.local_nodes * (hl2 + d_l);

  r.training_term_global = term_g.get_str();
  r.training_cost_per_epoch = training.get_str();
  r.inference_cost = inference.get_str();
  return r;
}

std::string complexity_report_text(const ComplexityReport& r) {
  std::ostringstream ss;
  auto line = [&](const char* k, const std::string& v) {
    ss << k;
    for (size_t i = std::char_traits<char>::length(k); i < 28; ++i) ss << ' ';
    ss << v << '\n';
  };
  line("d_global_multiband", r.d_global_multiband);
  line("d_global_singleband", r.d_global_singleband);
  line("d_regional", r.d_regional);
  line("d_local", r.d_local);
  line("d_total", r.d_total);
  line("training_term_global", r.training_term_global);
  line("training_cost_per_epoch", r.training_cost_per_epoch);
  line("inference_cost", r.inference_cost);
  return ss.str();
}

}  // namespace spectrumlab
