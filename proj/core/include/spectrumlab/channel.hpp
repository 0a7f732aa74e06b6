#pragma once

#include <vector>

#include "spectrumlab/rng.hpp"
#include "spectrumlab/scenario.hpp"
#include "spectrumlab/topology.hpp"

namespace spectrumlab {

// Free-space path loss between two points, dB. Throws DomainError at d = 0.
double path_loss_db(const std::array<double, 3>& tx_pos,
                    const std::array<double, 3>& rx_pos, double carrier_hz);

// Linear power fading factor. Rayleigh draws a unit-mean exponential;
// shadowed Rician draws |A + Z|^2 with Nakagami-m LOS amplitude A
// (E[A^2] = omega) and complex Gaussian scatter Z (E[|Z|^2] = 2b), so the
// mean power is 2b + omega.
double sample_fading(const FadingParams& params, Rng& rng);

// gain = 10^(-(path_loss + atmospheric)/10) * fading.
double link_gain(const Node& tx, const Node& rx, double carrier_hz,
                 const FadingParams& fading, double atmospheric_db, Rng& rng);

// Fading params + atmospheric loss implied by the transmitter kind:
// satellite links are shadowed Rician with 1 dB of atmospheric loss,
// everything else Rayleigh with none.
FadingParams fading_for_link(NodeKind tx_kind, const ScenarioConfig& cfg);
double atmospheric_loss_db(NodeKind tx_kind);

// Block fading: one independent realization per (serving node, user, channel)
// per slot.
struct ChannelRealization {
  int slot = 0;
  int n_serving = 0;
  int n_users = 0;
  int n_channels = 0;
  std::vector<double> gains;  // [serving][user][channel]

  double at(int serving_pos, int user_pos, int channel) const {
    return gains[(static_cast<size_t>(serving_pos) * n_users + user_pos) *
                     n_channels +
                 channel];
  }
  double mean_gain(int serving_pos, int user_pos) const;
};

ChannelRealization sample_realization(const NetworkGraph& graph,
                                      const ScenarioConfig& cfg, int slot,
                                      Rng& rng);

}  // namespace spectrumlab
