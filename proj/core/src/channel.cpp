#include "spectrumlab/channel.hpp"

#include <cmath>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
}

double path_loss_db(const std::array<double, 3>& tx_pos,
                    const std::array<double, 3>& rx_pos, double carrier_hz) {
  if (carrier_hz <= 0) throw DomainError("carrier frequency must be positive");
  double dx = tx_pos[0] - rx_pos[0];
  double dy = tx_pos[1] - rx_pos[1];
  double dz = tx_pos[2] - rx_pos[2];
  double d = std::sqrt(dx * dx + dy * dy + dz * dz);
  if (d <= 0) throw DomainError("path loss undefined for zero distance");
  return 20.0 * std::log10(d) + 20.0 * std::log10(carrier_hz) +
         20.0 * std::log10(4.0 * M_PI / kSpeedOfLight);
}

double sample_fading(const FadingParams& params, Rng& rng) {
  if (params.kind == FadingParams::Kind::Rayleigh) {
    std::exponential_distribution<double> power(1.0);
    return power(rng);
  }
  // Shadowed Rician: LOS amplitude is Nakagami-m (A^2 ~ Gamma(m, omega/m)),
  // the scatter component is complex Gaussian with per-axis variance b.
  std::gamma_distribution<double> los_power(params.rician_m,
                                            params.rician_omega / params.rician_m);
  std::normal_distribution<double> scatter(0.0, std::sqrt(params.rician_b));
  double a = std::sqrt(los_power(rng));
  double re = a + scatter(rng);
  double im = scatter(rng);
  return re * re + im * im;
}

double link_gain(const Node& tx, const Node& rx, double carrier_hz,
                 const FadingParams& fading, double atmospheric_db, Rng& rng) {
  double loss_db =
      path_loss_db(tx.position, rx.position, carrier_hz) + atmospheric_db;
  return std::pow(10.0, -loss_db / 10.0) * sample_fading(fading, rng);
}

FadingParams fading_for_link(NodeKind tx_kind, const ScenarioConfig& cfg) {
  if (tx_kind == NodeKind::Satellite) return cfg.fading;
  FadingParams p;
  p.kind = FadingParams::Kind::Rayleigh;
  return p;
}

double atmospheric_loss_db(NodeKind tx_kind) {
  return tx_kind == NodeKind::Satellite ? defaults::kAtmosphericLossSatDb : 0.0;
}

double ChannelRealization::mean_gain(int serving_pos, int user_pos) const {
  double sum = 0;
  for (int c = 0; c < n_channels; ++c) sum += at(serving_pos, user_pos, c);
  return sum / n_channels;
}

ChannelRealization sample_realization(const NetworkGraph& graph,
                                      const ScenarioConfig& cfg, int slot,
                                      Rng& rng) {
  ChannelRealization r;
  r.slot = slot;
  r.n_serving = static_cast<int>(graph.serving.size());
  r.n_users = static_cast<int>(graph.users.size());
  r.n_channels = cfg.total_channels();
  r.gains.resize(static_cast<size_t>(r.n_serving) * r.n_users * r.n_channels);

  std::exponential_distribution<double> rayleigh(1.0);
  size_t idx = 0;
  for (int s = 0; s < r.n_serving; ++s) {
    const Node& tx = graph.node(graph.serving[static_cast<size_t>(s)]);
    for (int u = 0; u < r.n_users; ++u) {
      const Node& rx = graph.node(graph.users[static_cast<size_t>(u)]);
      double loss_db = path_loss_db(tx.position, rx.position, cfg.carrier_hz) +
                       atmospheric_loss_db(tx.kind) -
                       defaults::kServingAntennaGainDb;
      double base = std::pow(10.0, -loss_db / 10.0);
      for (int c = 0; c < r.n_channels; ++c)
        r.gains[idx++] = base * rayleigh(rng);
    }
  }
  return r;
}

}  // namespace spectrumlab
