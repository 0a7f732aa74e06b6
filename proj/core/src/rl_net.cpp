#include "spectrumlab/rl/net.hpp"

#include <algorithm>
#include <cmath>

#include "spectrumlab/errors.hpp"

namespace spectrumlab::rl {

void Mlp::compute_offsets() {
  layer_offsets_.clear();
  size_t off = 0;
  int in = spec_.input_len;
  for (int h : spec_.hidden) {
    layer_offsets_.push_back(off);
    off += static_cast<size_t>(h) * in + h;  // W + b
    in = h;
  }
  policy_offset_ = off;
  off += static_cast<size_t>(spec_.total_logits()) * in + spec_.total_logits();
  value_offset_ = off;
  off += static_cast<size_t>(in) + 1;
  params_.resize(off);
}

Mlp Mlp::init(const NetSpec& spec, Rng& rng) {
  if (spec.input_len < 1) throw DomainError("NetSpec.input_len must be >= 1");
  for (int h : spec.hidden)
    if (h < 1) throw DomainError("NetSpec hidden widths must be >= 1");
  for (int h : spec.head_sizes)
    if (h < 1) throw DomainError("NetSpec head sizes must be >= 1");

  Mlp net;
  net.spec_ = spec;
  net.compute_offsets();

  auto fill = [&](size_t w_off, int fan_out, int fan_in) {
    double limit = std::sqrt(6.0 / (fan_in + fan_out));
    std::uniform_real_distribution<double> dist(-limit, limit);
    for (int i = 0; i < fan_out * fan_in; ++i)
      net.params_[w_off + static_cast<size_t>(i)] = dist(rng);
    for (int i = 0; i < fan_out; ++i)
      net.params_[w_off + static_cast<size_t>(fan_out) * fan_in + i] = 0.0;
  };

  int in = spec.input_len;
  for (size_t l = 0; l < spec.hidden.size(); ++l) {
    fill(net.layer_offsets_[l], spec.hidden[l], in);
    in = spec.hidden[l];
  }
  if (spec.total_logits() > 0) fill(net.policy_offset_, spec.total_logits(), in);
  fill(net.value_offset_, 1, in);
  return net;
}

void Mlp::set_params(std::vector<double> p) {
  if (p.size() != params_.size())
    throw DomainError("parameter vector size mismatch");
  params_ = std::move(p);
}

void Mlp::forward_cached(std::span<const double> obs, Cache& cache) const {
  if (static_cast<int>(obs.size()) != spec_.input_len)
    throw DomainError("observation length " + std::to_string(obs.size()) +
                      " does not match input_len " +
                      std::to_string(spec_.input_len));

  cache.act.assign(spec_.hidden.size() + 1, {});
  cache.act[0].assign(obs.begin(), obs.end());

  int in = spec_.input_len;
  for (size_t l = 0; l < spec_.hidden.size(); ++l) {
    int out = spec_.hidden[l];
    const double* w = params_.data() + layer_offsets_[l];
    const double* b = w + static_cast<size_t>(out) * in;
    const std::vector<double>& x = cache.act[l];
    std::vector<double>& y = cache.act[l + 1];
    y.resize(static_cast<size_t>(out));
    for (int o = 0; o < out; ++o) {
      double acc = b[o];
      const double* row = w + static_cast<size_t>(o) * in;
      for (int i = 0; i < in; ++i) acc += row[i] * x[static_cast<size_t>(i)];
      y[static_cast<size_t>(o)] = std::tanh(acc);
    }
    in = out;
  }

  const std::vector<double>& h = cache.act.back();
  int logits = spec_.total_logits();
  cache.logits.resize(static_cast<size_t>(logits));
  const double* wp = params_.data() + policy_offset_;
  const double* bp = wp + static_cast<size_t>(logits) * in;
  for (int o = 0; o < logits; ++o) {
    double acc = bp[o];
    const double* row = wp + static_cast<size_t>(o) * in;
    for (int i = 0; i < in; ++i) acc += row[i] * h[static_cast<size_t>(i)];
    cache.logits[static_cast<size_t>(o)] = acc;
  }
  const double* wv = params_.data() + value_offset_;
  double acc = wv[in];
  for (int i = 0; i < in; ++i) acc += wv[i] * h[static_cast<size_t>(i)];
  cache.value = acc;
}

Mlp::Output Mlp::forward(std::span<const double> obs) const {
  Cache cache;
  forward_cached(obs, cache);
  return Output{std::move(cache.logits), cache.value};
}

int Mlp::head_offset(int head) const {
  int off = 0;
  for (int h = 0; h < head; ++h) off += spec_.head_sizes[static_cast<size_t>(h)];
  return off;
}

namespace {

// Softmax of one head slice, numerically shifted.
void softmax(const double* logits, int n, std::vector<double>& out) {
  double mx = logits[0];
  for (int i = 1; i < n; ++i) mx = std::max(mx, logits[i]);
  out.resize(static_cast<size_t>(n));
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    out[static_cast<size_t>(i)] = std::exp(logits[i] - mx);
    sum += out[static_cast<size_t>(i)];
  }
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] /= sum;
}

}  // namespace

std::vector<double> Mlp::head_probs(const Output& out, int head) const {
  std::vector<double> p;
  softmax(out.logits.data() + head_offset(head),
          spec_.head_sizes[static_cast<size_t>(head)], p);
  return p;
}

int Mlp::sample_head(const Output& out, int head, Rng& rng) const {
  std::vector<double> p = head_probs(out, head);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double r = u(rng);
  double acc = 0;
  for (size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (r <= acc) return static_cast<int>(i);
  }
  return static_cast<int>(p.size()) - 1;
}

int Mlp::argmax_head(const Output& out, int head) const {
  const double* logits = out.logits.data() + head_offset(head);
  int n = spec_.head_sizes[static_cast<size_t>(head)];
  int best = 0;
  for (int i = 1; i < n; ++i)
    if (logits[i] > logits[best]) best = i;
  return best;
}

double Mlp::logp_of(const Output& out, std::span<const int> actions,
                    std::span<const std::uint8_t> mask) const {
  double lp = 0;
  std::vector<double> p;
  for (size_t h = 0; h < spec_.head_sizes.size(); ++h) {
    if (!mask.empty() && !mask[h]) continue;
    softmax(out.logits.data() + head_offset(static_cast<int>(h)),
            spec_.head_sizes[h], p);
    lp += std::log(std::max(p[static_cast<size_t>(actions[h])], 1e-300));
  }
  return lp;
}

double Mlp::entropy_of(const Output& out, std::span<const std::uint8_t> mask) const {
  double total = 0;
  std::vector<double> p;
  for (size_t h = 0; h < spec_.head_sizes.size(); ++h) {
    if (!mask.empty() && !mask[h]) continue;
    softmax(out.logits.data() + head_offset(static_cast<int>(h)),
            spec_.head_sizes[h], p);
    for (double q : p)
      if (q > 0) total -= q * std::log(q);
  }
  return total;
}

LossStats Mlp::backward(const PpoBatch& batch, const PpoConfig& cfg,
                        std::vector<double>& grad) const {
  if (batch.items.empty()) throw ProtocolError("backward: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.items.size());
  grad.assign(params_.size(), 0.0);

  LossStats stats;
  Cache cache;
  std::vector<double> dlogits;
  std::vector<double> probs;
  const int last_hidden = spec_.hidden.empty() ? spec_.input_len : spec_.hidden.back();
  std::vector<double> dh(static_cast<size_t>(last_hidden));

  for (size_t s = 0; s < batch.items.size(); ++s) {
    const Transition& t = *batch.items[s];
    forward_cached(t.obs, cache);

    // New log-probability and per-sample PPO terms.
    Output view{cache.logits, cache.value};
    double logp_new = logp_of(view, t.actions, t.mask);
    double ratio = std::exp(logp_new - t.logp);
    double adv = batch.advantage[s];
    double unclipped = ratio * adv;
    double clipped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip) * adv;
    double objective = std::min(unclipped, clipped);
    double dobj_dlogp = unclipped <= clipped ? ratio * adv : 0.0;

    double verr = cache.value - batch.ret[s];
    double ent = entropy_of(view, t.mask);

    stats.policy += -objective;
    stats.value += verr * verr;
    stats.entropy += ent;
    stats.mean_ratio += ratio;

    // dL/dlogits and dL/dvalue for this sample (already scaled by 1/n).
    double dlogp_scale = -dobj_dlogp * inv_n;
    double dvalue = cfg.value_coef * 2.0 * verr * inv_n;

    dlogits.assign(cache.logits.size(), 0.0);
    for (size_t h = 0; h < spec_.head_sizes.size(); ++h) {
      if (!t.mask.empty() && !t.mask[h]) continue;
      int off = head_offset(static_cast<int>(h));
      int n = spec_.head_sizes[h];
      softmax(cache.logits.data() + off, n, probs);
      double head_entropy = 0;
      for (double q : probs)
        if (q > 0) head_entropy -= q * std::log(q);
      int a = t.actions[h];
      for (int i = 0; i < n; ++i) {
        double p = probs[static_cast<size_t>(i)];
        double dlogp_dz = (i == a ? 1.0 : 0.0) - p;
        double dent_dz = p > 0 ? -p * (std::log(p) + head_entropy) : 0.0;
        dlogits[static_cast<size_t>(off + i)] =
            dlogp_scale * dlogp_dz - cfg.entropy_coef * inv_n * dent_dz;
      }
    }

    // Backprop: policy and value heads into the last hidden activation.
    const std::vector<double>& h_last = cache.act.back();
    std::fill(dh.begin(), dh.end(), 0.0);
    const int logits = spec_.total_logits();
    double* gwp = grad.data() + policy_offset_;
    const double* wp = params_.data() + policy_offset_;
    for (int o = 0; o < logits; ++o) {
      double d = dlogits[static_cast<size_t>(o)];
      if (d == 0) continue;
      double* grow = gwp + static_cast<size_t>(o) * last_hidden;
      const double* row = wp + static_cast<size_t>(o) * last_hidden;
      for (int i = 0; i < last_hidden; ++i) {
        grow[i] += d * h_last[static_cast<size_t>(i)];
        dh[static_cast<size_t>(i)] += d * row[i];
      }
      gwp[static_cast<size_t>(logits) * last_hidden + o] += d;  // bias
    }
    double* gwv = grad.data() + value_offset_;
    const double* wv = params_.data() + value_offset_;
    for (int i = 0; i < last_hidden; ++i) {
      gwv[i] += dvalue * h_last[static_cast<size_t>(i)];
      dh[static_cast<size_t>(i)] += dvalue * wv[i];
    }
    gwv[last_hidden] += dvalue;

    // Through the tanh trunk.
    std::vector<double> dcur = dh;
    for (size_t l = spec_.hidden.size(); l-- > 0;) {
      int out = spec_.hidden[l];
      int in = l == 0 ? spec_.input_len : spec_.hidden[l - 1];
      const std::vector<double>& y = cache.act[l + 1];
      const std::vector<double>& x = cache.act[l];
      double* gw = grad.data() + layer_offsets_[l];
      const double* w = params_.data() + layer_offsets_[l];
      std::vector<double> dprev(static_cast<size_t>(in), 0.0);
      for (int o = 0; o < out; ++o) {
        double dpre = dcur[static_cast<size_t>(o)] *
                      (1.0 - y[static_cast<size_t>(o)] * y[static_cast<size_t>(o)]);
        if (dpre == 0) continue;
        double* grow = gw + static_cast<size_t>(o) * in;
        const double* row = w + static_cast<size_t>(o) * in;
        for (int i = 0; i < in; ++i) {
          grow[i] += dpre * x[static_cast<size_t>(i)];
          dprev[static_cast<size_t>(i)] += dpre * row[i];
        }
        gw[static_cast<size_t>(out) * in + o] += dpre;  // bias
      }
      dcur = std::move(dprev);
    }
  }

  stats.policy *= inv_n;
  stats.value *= inv_n;
  stats.entropy *= inv_n;
  stats.mean_ratio *= inv_n;
  stats.total =
      stats.policy + cfg.value_coef * stats.value - cfg.entropy_coef * stats.entropy;

  for (size_t i = 0; i < grad.size(); ++i) {
    if (!std::isfinite(grad[i]))
      throw NumericalError("non-finite gradient at parameter index " +
                           std::to_string(i));
  }
  return stats;
}

void adam_step(std::vector<double>& params, std::vector<double>& grad,
               AdamState& state, double learning_rate, double max_grad_norm) {
  constexpr double kBeta1 = 0.9;
  constexpr double kBeta2 = 0.999;
  constexpr double kEps = 1e-8;

  if (state.m.size() != params.size()) state.init(params.size());

  double norm_sq = 0;
  for (double g : grad) norm_sq += g * g;
  double norm = std::sqrt(norm_sq);
  if (max_grad_norm > 0 && norm > max_grad_norm) {
    double scale = max_grad_norm / norm;
    for (double& g : grad) g *= scale;
  }

  state.step += 1;
  double bc1 = 1.0 - std::pow(kBeta1, static_cast<double>(state.step));
  double bc2 = 1.0 - std::pow(kBeta2, static_cast<double>(state.step));
  for (size_t i = 0; i < params.size(); ++i) {
    state.m[i] = kBeta1 * state.m[i] + (1.0 - kBeta1) * grad[i];
    state.v[i] = kBeta2 * state.v[i] + (1.0 - kBeta2) * grad[i] * grad[i];
    double mhat = state.m[i] / bc1;
    double vhat = state.v[i] / bc2;
    params[i] -= learning_rate * mhat / (std::sqrt(vhat) + kEps);
  }
}

}  // namespace spectrumlab::rl
