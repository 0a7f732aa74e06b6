#include "spectrumlab/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "spectrumlab/errors.hpp"

namespace spectrumlab::rl {

GaeResult gae(std::span<const double> rewards, std::span<const double> values,
              double bootstrap_value, double gamma, double lambda) {
  if (rewards.size() != values.size())
    throw DomainError("gae: rewards/values length mismatch");
  GaeResult out;
  size_t n = rewards.size();
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0;
  double next_value = bootstrap_value;
  for (size_t i = n; i-- > 0;) {
    double delta = rewards[i] + gamma * next_value - values[i];
    next_adv = delta + gamma * lambda * next_adv;
    out.advantages[i] = next_adv;
    out.returns[i] = next_adv + values[i];
    next_value = values[i];
  }
  return out;
}

UpdateDiag ppo_update(Mlp& net, AdamState& adam, const RolloutBuffer& buffer,
                      const PpoConfig& cfg, Rng& rng) {
  if (buffer.empty()) throw ProtocolError("ppo_update: empty batch");

  // GAE per done-delimited sequence, then one normalization over the batch.
  size_t n = buffer.size();
  std::vector<double> advantage(n), ret(n);
  size_t start = 0;
  while (start < n) {
    size_t end = start;
    while (end < n && !buffer.items[end].done) ++end;
    size_t len = std::min(end, n - 1) - start + 1;
    std::vector<double> rewards(len), values(len);
    for (size_t i = 0; i < len; ++i) {
      rewards[i] = buffer.items[start + i].reward;
      values[i] = buffer.items[start + i].value;
    }
    GaeResult g = gae(rewards, values, 0.0, cfg.gamma, cfg.gae_lambda);
    for (size_t i = 0; i < len; ++i) {
      advantage[start + i] = g.advantages[i];
      ret[start + i] = g.returns[i];
    }
    start += len;
  }

  double mean = std::accumulate(advantage.begin(), advantage.end(), 0.0) /
                static_cast<double>(n);
  double var = 0;
  for (double a : advantage) var += (a - mean) * (a - mean);
  double stddev = std::sqrt(var / static_cast<double>(n));
  for (double& a : advantage) a = (a - mean) / (stddev + 1e-8);

  std::vector<size_t> order(n);
  std::iota(order.begin(), order.end(), 0);

  UpdateDiag diag;
  int mb_size = std::min<int>(cfg.minibatch, static_cast<int>(n));
  std::vector<double> grad;
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (size_t off = 0; off + 1 <= n; off += static_cast<size_t>(mb_size)) {
      size_t take = std::min<size_t>(static_cast<size_t>(mb_size), n - off);
      PpoBatch batch;
      batch.items.reserve(take);
      batch.advantage.reserve(take);
      batch.ret.reserve(take);
      for (size_t i = 0; i < take; ++i) {
        size_t idx = order[off + i];
        batch.items.push_back(&buffer.items[idx]);
        batch.advantage.push_back(advantage[idx]);
        batch.ret.push_back(ret[idx]);
      }
      LossStats stats = net.backward(batch, cfg, grad);
      std::vector<double> params = net.params();
      adam_step(params, grad, adam, cfg.learning_rate, cfg.max_grad_norm);
      net.set_params(std::move(params));

      if (diag.minibatches == 0) diag.mean_ratio_first = stats.mean_ratio;
      diag.loss = stats.total;
      diag.policy_loss = stats.policy;
      diag.value_loss = stats.value;
      diag.entropy = stats.entropy;
      diag.minibatches += 1;
    }
  }
  return diag;
}

int converged_at(std::span<const double> normalized_history, double threshold,
                 int patience) {
  if (normalized_history.empty())
    throw DomainError("converged: empty reward history");
  int run = 0;
  for (size_t i = 1; i < normalized_history.size(); ++i) {
    double improvement = normalized_history[i] - normalized_history[i - 1];
    if (improvement < threshold) {
      if (++run >= patience) return static_cast<int>(i);
    } else {
      run = 0;
    }
  }
  return -1;
}

bool converged(std::span<const double> normalized_history, double threshold,
               int patience) {
  return converged_at(normalized_history, threshold, patience) >= 0;
}

std::vector<double> running_max_normalize(std::span<const double> rewards) {
  std::vector<double> out;
  out.reserve(rewards.size());
  double run_max = -std::numeric_limits<double>::infinity();
  for (double r : rewards) {
    run_max = std::max(run_max, r);
    double norm = run_max > 0 ? std::clamp(r / run_max, 0.0, 1.0) : 0.0;
    out.push_back(norm);
  }
  return out;
}

}  // namespace spectrumlab::rl
