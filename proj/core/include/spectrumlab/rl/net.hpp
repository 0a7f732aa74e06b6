#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "spectrumlab/rng.hpp"

namespace spectrumlab::rl {

// Feedforward policy/value network: tanh trunk, one categorical logit head per
// action digit, scalar value head.
struct NetSpec {
  int input_len = 1;
  std::vector<int> hidden{64, 64};
  std::vector<int> head_sizes;  // may be empty (value-only policy)

  int total_logits() const {
    int n = 0;
    for (int h : head_sizes) n += h;
    return n;
  }
};

struct PpoConfig {
  double learning_rate = 5e-4;
  int batch_slots = 2000;
  double gamma = 0.99;
  double clip = 0.2;
  double entropy_coef = 0.01;
  double value_coef = 1.0;
  double gae_lambda = 0.95;
  int epochs_per_update = 4;
  int minibatch = 256;
  double max_grad_norm = 0.5;
};

// One decision of one agent.
struct Transition {
  std::vector<double> obs;
  std::vector<int> actions;      // one entry per head
  std::vector<std::uint8_t> mask;  // 1 = head active in this decision
  double logp = 0;               // behaviour-time log probability
  double reward = 0;
  double value = 0;
  bool done = false;
};

// Minibatch view with advantages/returns attached.
struct PpoBatch {
  std::vector<const Transition*> items;
  std::vector<double> advantage;
  std::vector<double> ret;
};

struct LossStats {
  double total = 0;
  double policy = 0;
  double value = 0;
  double entropy = 0;
  double mean_ratio = 0;
};

class Mlp {
 public:
  Mlp() = default;

  // Weights uniform in +-sqrt(6 / (fan_in + fan_out)), biases zero.
  static Mlp init(const NetSpec& spec, Rng& rng);

  const NetSpec& spec() const { return spec_; }
  const std::vector<double>& params() const { return params_; }
  void set_params(std::vector<double> p);
  size_t param_count() const { return params_.size(); }

  struct Output {
    std::vector<double> logits;  // concatenated heads
    double value = 0;
  };
  Output forward(std::span<const double> obs) const;

  std::vector<double> head_probs(const Output& out, int head) const;
  int sample_head(const Output& out, int head, Rng& rng) const;
  int argmax_head(const Output& out, int head) const;
  double logp_of(const Output& out, std::span<const int> actions,
                 std::span<const std::uint8_t> mask) const;
  double entropy_of(const Output& out, std::span<const std::uint8_t> mask) const;

  // Gradient of the clipped-surrogate loss
  //   L = -L_clip + value_coef * (value - return)^2 - entropy_coef * H
  // averaged over the batch.  Throws NumericalError (with the offending
  // parameter index) when a non-finite gradient appears.
  LossStats backward(const PpoBatch& batch, const PpoConfig& cfg,
                     std::vector<double>& grad) const;

 private:
  struct Cache {
    std::vector<std::vector<double>> act;  // act[0] = obs, then tanh outputs
    std::vector<double> logits;
    double value = 0;
  };
  void forward_cached(std::span<const double> obs, Cache& cache) const;
  int head_offset(int head) const;

  NetSpec spec_;
  std::vector<double> params_;
  // Parameter layout, in order: per hidden layer W (out x in, row-major) then
  // bias; policy head matrix (total_logits x last_hidden) then bias; value
  // weights (last_hidden) then bias.
  std::vector<size_t> layer_offsets_;
  size_t policy_offset_ = 0;
  size_t value_offset_ = 0;

  void compute_offsets();
};

struct AdamState {
  std::vector<double> m;
  std::vector<double> v;
  long step = 0;

  void init(size_t n) {
    m.assign(n, 0.0);
    v.assign(n, 0.0);
    step = 0;
  }
};

// One adaptive-moment step; clips the global gradient norm first.
void adam_step(std::vector<double>& params, std::vector<double>& grad,
               AdamState& state, double learning_rate, double max_grad_norm);

}  // namespace spectrumlab::rl
