#pragma once

#include <span>
#include <vector>

#include "spectrumlab/rl/net.hpp"

namespace spectrumlab::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// delta_t = r_t + gamma * V_{t+1} - V_t;  A_t = delta_t + gamma*lambda*A_{t+1}.
GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              double bootstrap_value, double gamma, double lambda);

struct RolloutBuffer {
  std::vector<Transition> items;

  void push(Transition t) { items.push_back(std::move(t)); }
  void clear() { items.clear(); }
  size_t size() const { return items.size(); }
  bool empty() const { return items.empty(); }
};

struct UpdateDiag {
  double loss = 0;
  double policy_loss = 0;
  double value_loss = 0;
  double entropy = 0;
  double mean_ratio_first = 0;  // over the first minibatch of the first epoch
  int minibatches = 0;
};

// Runs epochs_per_update passes of minibatched Adam over the buffer, with
// per-batch advantage normalization and global gradient-norm clipping.
// Sequences are delimited by done flags; an unterminated tail bootstraps 0.
UpdateDiag ppo_update(Mlp& net, AdamState& adam, const RolloutBuffer& buffer,
                      const PpoConfig& cfg, Rng& rng);

// True when the improvement of the (already running-max-normalized) reward
// history stays below `threshold` for `patience` consecutive episodes.
bool converged(std::span<const double> normalized_history, double threshold = 0.15,
               int patience = 10);
// Index of the episode where the detector first fires, or -1.
int converged_at(std::span<const double> normalized_history,
                 double threshold = 0.15, int patience = 10);

// Running-max normalization to [0, 1] used by the training curve.
std::vector<double> running_max_normalize(std::span<const double> rewards);

}  // namespace spectrumlab::rl
