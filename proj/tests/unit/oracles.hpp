// Test-side reference implementations, kept independent of the library code
// they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "spectrumlab/rl/net.hpp"

namespace oracle {

// ---- combinatorics ----------------------------------------------------------

// Multisets of size b drawn from f symbols, counted by explicit enumeration of
// nondecreasing b-tuples.
inline std::uint64_t count_multisets(int f, int b) {
  std::uint64_t count = 0;
  std::vector<int> pick(static_cast<size_t>(b), 0);
  std::function<void(int, int)> rec = [&](int pos, int low) {
    if (pos == b) {
      ++count;
      return;
    }
    for (int v = low; v < f; ++v) {
      pick[static_cast<size_t>(pos)] = v;
      rec(pos + 1, v);
    }
  };
  rec(0, 0);
  return count;
}

// Set partitions of {0..n-1} enumerated through restricted growth strings;
// `visit` receives the number of blocks.
inline void enumerate_partitions(int n, const std::function<void(int)>& visit) {
  std::vector<int> rgs(static_cast<size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int pos, int max_block) {
    if (pos == n) {
      visit(max_block + 1);
      return;
    }
    for (int b = 0; b <= max_block + 1; ++b) {
      rgs[static_cast<size_t>(pos)] = b;
      rec(pos + 1, std::max(max_block, b));
    }
  };
  if (n == 0) {
    visit(0);
    return;
  }
  rec(0, -1);
}

inline std::uint64_t count_partitions_into(int n, int k) {
  std::uint64_t count = 0;
  enumerate_partitions(n, [&](int blocks) {
    if (blocks == k) ++count;
  });
  return count;
}

inline std::uint64_t binom_u64(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::uint64_t>(n - k + i) / i;
  return r;
}

// The paper's single-band count enumerated directly: pairs of (partition of
// beams into k blocks, k-subset of bands), summed over k.
inline std::uint64_t count_singleband(int f, int b) {
  std::uint64_t count = 0;
  enumerate_partitions(b, [&](int blocks) {
    if (blocks <= f) count += binom_u64(f, blocks);
  });
  return count;
}

// ---- PPO loss for finite differencing ---------------------------------------

struct FdSample {
  std::vector<double> obs;
  std::vector<int> actions;
  std::vector<std::uint8_t> mask;
  double logp_old = 0;
  double advantage = 0;
  double ret = 0;
};

// Total loss recomputed from forward passes only; the analytic backward must
// differentiate exactly this.
inline double ppo_loss(const spectrumlab::rl::Mlp& net,
                       const spectrumlab::rl::PpoConfig& cfg,
                       const std::vector<FdSample>& samples) {
  double total = 0;
  for (const FdSample& s : samples) {
    auto out = net.forward(s.obs);
    double logp = 0;
    double entropy = 0;
    int off = 0;
    const auto& heads = net.spec().head_sizes;
    for (size_t h = 0; h < heads.size(); ++h) {
      int n = heads[h];
      if (s.mask.empty() || s.mask[h]) {
        double mx = out.logits[static_cast<size_t>(off)];
        for (int i = 1; i < n; ++i)
          mx = std::max(mx, out.logits[static_cast<size_t>(off + i)]);
        double z = 0;
        for (int i = 0; i < n; ++i)
          z += std::exp(out.logits[static_cast<size_t>(off + i)] - mx);
        for (int i = 0; i < n; ++i) {
          double p = std::exp(out.logits[static_cast<size_t>(off + i)] - mx) / z;
          if (p > 0) entropy -= p * std::log(p);
        }
        double pa =
            std::exp(out.logits[static_cast<size_t>(off + s.actions[h])] - mx) / z;
        logp += std::log(pa);
      }
      off += n;
    }
    double ratio = std::exp(logp - s.logp_old);
    double unclipped = ratio * s.advantage;
    double clipped =
        std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * s.advantage;
    double objective = std::min(unclipped, clipped);
    double verr = out.value - s.ret;
    total += -objective + cfg.value_coef * verr * verr - cfg.entropy_coef * entropy;
  }
  return total / static_cast<double>(samples.size());
}

}  // namespace oracle
