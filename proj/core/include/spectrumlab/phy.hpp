#pragma once

#include <map>
#include <utility>
#include <vector>

#include "spectrumlab/channel.hpp"
#include "spectrumlab/topology.hpp"

namespace spectrumlab {

// Downlink NOMA cluster on one absolute channel of one serving node.
// Members are kept in decode order: descending link gain, ties by ascending
// user id.  The strongest user cancels every weaker user's signal; power
// fractions are positive, sum to 1 and never decrease along the member list.
struct NomaMember {
  NodeId user = kNoNode;
  double power_fraction = 0;
  double gain = 0;  // linear gain serving -> user on the cluster channel
};

struct NomaCluster {
  NodeId serving = kNoNode;
  int absolute_channel = 0;
  std::vector<NomaMember> members;
};

// Decode order for a set of (user, gain) pairs: descending gain, ascending id.
std::vector<NodeId> sic_order(const std::vector<std::pair<NodeId, double>>& gains);

struct SinrRow {
  NodeId user = kNoNode;
  NodeId serving = kNoNode;
  int channel = 0;
  double sinr = 0;
  double rate_bps = 0;
  double intra_cluster_w = 0;
  double co_channel_same_tier_w = 0;
  double co_channel_cross_tier_w = 0;
};

struct CoChannelInterference {
  double same_tier_w = 0;
  double cross_tier_w = 0;
  double total() const { return same_tier_w + cross_tier_w; }
};

// Throws SicFeasibilityError when the cluster's power fractions violate the
// inverse-gain ordering, DomainError when noise <= 0 or invariants fail.
std::vector<SinrRow> noma_sinr(const NomaCluster& cluster, double tx_power_w,
                               const std::map<NodeId, CoChannelInterference>& co,
                               double noise_w, double channel_bandwidth_hz);

// Co-channel interference per user: every other transmitter whose active
// channels include the user's channel contributes per-channel power times the
// gain towards that user.  Same tier = same transmitter kind as the user's
// serving node.  Per-channel power is the node budget split evenly over its
// active channels.
std::map<NodeId, CoChannelInterference> aggregate_interference(
    const std::vector<NomaCluster>& clusters, const ChannelRealization& realization,
    const NetworkGraph& graph);

// Shannon capacity; throws DomainError when sinr < 0 or bandwidth <= 0.
double capacity_bps(double bandwidth_hz, double sinr);

// k*T*B scaled by the receiver noise figure.
double thermal_noise_w(double bandwidth_hz);

}  // namespace spectrumlab
