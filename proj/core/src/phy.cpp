#include "spectrumlab/phy.hpp"

#include <algorithm>
#include <cmath>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

std::vector<NodeId> sic_order(const std::vector<std::pair<NodeId, double>>& gains) {
  if (gains.empty()) throw DomainError("sic_order: empty cluster");
  std::vector<std::pair<NodeId, double>> sorted = gains;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<NodeId> out;
  out.reserve(sorted.size());
  for (const auto& [id, g] : sorted) out.push_back(id);
  return out;
}

std::vector<SinrRow> noma_sinr(const NomaCluster& cluster, double tx_power_w,
                               const std::map<NodeId, CoChannelInterference>& co,
                               double noise_w, double channel_bandwidth_hz) {
  if (cluster.members.empty()) throw DomainError("noma_sinr: empty cluster");
  if (static_cast<int>(cluster.members.size()) > defaults::kMaxClusterSize)
    throw DomainError("noma_sinr: cluster exceeds 4 users");
  if (noise_w <= 0) throw DomainError("noma_sinr: noise must be positive");

  double frac_sum = 0;
  for (size_t k = 0; k < cluster.members.size(); ++k) {
    const NomaMember& m = cluster.members[k];
    if (m.power_fraction <= 0)
      throw DomainError("noma_sinr: power fractions must be positive");
    frac_sum += m.power_fraction;
    if (k > 0) {
      const NomaMember& prev = cluster.members[k - 1];
      bool order_ok = prev.gain > m.gain ||
                      (prev.gain == m.gain && prev.user < m.user);
      if (!order_ok) throw DomainError("noma_sinr: members not in decode order");
      if (prev.power_fraction > m.power_fraction + 1e-12)
        throw SicFeasibilityError(
            "noma_sinr: power fractions must not decrease towards weaker users");
    }
  }
  if (std::abs(frac_sum - 1.0) > 1e-9)
    throw DomainError("noma_sinr: power fractions must sum to 1");

  std::vector<SinrRow> rows;
  rows.reserve(cluster.members.size());
  double stronger_fraction = 0;  // fractions of users decoded after u (rank < u)
  for (const NomaMember& m : cluster.members) {
    SinrRow row;
    row.user = m.user;
    row.serving = cluster.serving;
    row.channel = cluster.absolute_channel;
    auto it = co.find(m.user);
    if (it != co.end()) {
      row.co_channel_same_tier_w = it->second.same_tier_w;
      row.co_channel_cross_tier_w = it->second.cross_tier_w;
    }
    row.intra_cluster_w = stronger_fraction * tx_power_w * m.gain;
    double signal = m.power_fraction * tx_power_w * m.gain;
    double denom = row.intra_cluster_w + row.co_channel_same_tier_w +
                   row.co_channel_cross_tier_w + noise_w;
    row.sinr = signal / denom;
    row.rate_bps = capacity_bps(channel_bandwidth_hz, row.sinr);
    rows.push_back(row);
    stronger_fraction += m.power_fraction;
  }
  return rows;
}

std::map<NodeId, CoChannelInterference> aggregate_interference(
    const std::vector<NomaCluster>& clusters, const ChannelRealization& realization,
    const NetworkGraph& graph) {
  // Active channel count per transmitter decides its per-channel power.
  std::map<NodeId, int> active_channels;
  for (const NomaCluster& c : clusters) ++active_channels[c.serving];

  std::map<NodeId, CoChannelInterference> out;
  for (const NomaCluster& c : clusters) {
    NodeKind rx_tier = graph.node(c.serving).kind;
    for (const NomaMember& m : c.members) {
      CoChannelInterference acc;
      for (const NomaCluster& other : clusters) {
        if (other.serving == c.serving) continue;
        if (other.absolute_channel != c.absolute_channel) continue;
        const Node& tx = graph.node(other.serving);
        double per_channel_w = tx.power_budget_w / active_channels[other.serving];
        double g = realization.at(graph.serving_pos(other.serving),
                                  graph.user_pos(m.user), c.absolute_channel);
        double watts = per_channel_w * g;
        if (tx.kind == rx_tier)
          acc.same_tier_w += watts;
        else
          acc.cross_tier_w += watts;
      }
      out[m.user] = acc;
    }
  }
  return out;
}

double capacity_bps(double bandwidth_hz, double sinr) {
  if (bandwidth_hz <= 0) throw DomainError("capacity_bps: bandwidth must be positive");
  if (sinr < 0) throw DomainError("capacity_bps: sinr must be nonnegative");
  return bandwidth_hz * std::log2(1.0 + sinr);
}

double thermal_noise_w(double bandwidth_hz) {
  constexpr double kBoltzmann = 1.380649e-23;
  double figure = std::pow(10.0, defaults::kNoiseFigureDb / 10.0);
  return kBoltzmann * defaults::kNoiseTemperatureK * bandwidth_hz * figure;
}

}  // namespace spectrumlab
