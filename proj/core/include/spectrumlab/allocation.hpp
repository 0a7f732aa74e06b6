#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spectrumlab/scenario.hpp"
#include "spectrumlab/topology.hpp"

namespace spectrumlab {

// Flat action indices can exceed 64 bits for the local tier at full scale.
using ActionIndex = unsigned __int128;
std::string action_index_to_string(ActionIndex v);

// The three-tier spectrum decision.
//
// Global: beams own contiguous runs of the F chunks.  Regional: each serving
// node holds one sub-band, stored both as the agent's digit s in [0,S) and as
// the resolved absolute position (chunk, subband).  Local: each user holds a
// channel in [0,C) inside its node's sub-band plus a power level in [1,P].
struct AllocationState {
  struct NodeBand {
    int digit = 0;    // regional action digit in [0, S)
    int chunk = 0;    // absolute chunk index
    int subband = 0;  // sub-band index inside the chunk
    bool operator==(const NodeBand&) const = default;
  };
  struct UserAlloc {
    int channel = 0;      // relative channel in [0, C)
    int power_level = 1;  // in [1, P]
    bool operator==(const UserAlloc&) const = default;
  };

  std::vector<std::vector<int>> beam_chunks;  // beam -> sorted owned chunks
  std::map<NodeId, NodeBand> node_band;       // serving node -> sub-band
  std::map<NodeId, UserAlloc> user_alloc;     // user -> (channel, power)
  std::map<NodeId, UavMove> uav_moves;        // last applied moves
};

// Absolute indices over the fixed grid: F chunks x S sub-bands x C channels.
int absolute_subband_index(const AllocationState::NodeBand& band, int subbands);
int absolute_channel_index(const AllocationState::NodeBand& band, int channel,
                           int subbands, int channels_per_subband);

// Digit -> (chunk, subband) under the beam's current ownership: digit s picks
// the (s * k)-th of the beam's k*S sub-band grid, spreading the S choices
// evenly across the owned chunks.
AllocationState::NodeBand resolve_subband_digit(const std::vector<int>& owned_chunks,
                                                int digit, int subbands);

struct HierarchyViolation {
  std::string tier;    // "global" | "regional" | "local"
  std::string detail;  // names the first violating entity
};

struct ValidationReport {
  bool ok = true;
  std::vector<HierarchyViolation> violations;  // at most one per tier
};

// Checks the three containment invariants: chunks partition {0..F-1}, each
// node's sub-band lies in a chunk its beam owns, each user's channel/power
// digits are in range and its serving node holds a sub-band.
ValidationReport validate_hierarchy(const AllocationState& alloc,
                                    const NetworkGraph& graph,
                                    const ScenarioConfig& cfg,
                                    const std::map<NodeId, NodeId>& serving_of_user);

// ---- Tier action spaces ----------------------------------------------------

// Global: contiguous compositions of F chunks over B beams, ranked in
// lexicographic order of (k_0, ..., k_{B-1}).
struct GlobalActionSpace {
  int beams = 1;
  int chunks = 1;

  ActionIndex cardinality() const;
  std::vector<int> decode(ActionIndex index) const;        // chunk counts per beam
  ActionIndex encode(const std::vector<int>& counts) const;
  std::vector<int> head_sizes() const;  // B-1 heads of (F+1) logits
};

// Regional: one base-S digit per controlled node, most significant digit first.
struct RegionalActionSpace {
  int subbands = 1;
  std::vector<NodeId> nodes;  // ascending id

  ActionIndex cardinality() const;
  std::vector<int> decode(ActionIndex index) const;
  ActionIndex encode(const std::vector<int>& digits) const;
  std::vector<int> head_sizes() const;  // one head of S per node
};

// Local: one (channel, power) digit pair per connected user (most significant
// first, digit = channel * P + (power - 1)), then the UAV move as the least
// significant digit when the node is a UAV.
struct LocalAction {
  std::vector<AllocationState::UserAlloc> per_user;  // aligned with `users`
  UavMove move = UavMove::Stay;
};

struct LocalActionSpace {
  int channels = 1;
  int power_levels = 1;
  std::vector<NodeId> users;  // ascending id, the node's current users
  bool has_move = false;

  ActionIndex cardinality() const;
  LocalAction decode(ActionIndex index) const;
  ActionIndex encode(const LocalAction& action) const;
  // Policy heads are padded to the observation capacity: per user slot one
  // C head and one P head, plus the move head for UAVs.
  std::vector<int> head_sizes(int max_users) const;
};

}  // namespace spectrumlab
