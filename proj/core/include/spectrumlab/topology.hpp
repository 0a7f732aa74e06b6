#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "spectrumlab/rng.hpp"
#include "spectrumlab/scenario.hpp"

namespace spectrumlab {

using NodeId = int;
inline constexpr NodeId kNoNode = -1;

enum class NodeKind { Satellite, Hap, Tbs, Uav, User };
std::string to_string(NodeKind k);

struct Node {
  NodeId id = kNoNode;
  NodeKind kind = NodeKind::User;
  std::array<double, 3> position{0, 0, 0};  // metres, z up
  double tx_power_w = 0;                    // 0 for users
  int beam_id = 0;
  int region_id = -1;  // -1 for satellite and HAPs
  double power_budget_w = 0;
};

struct Region {
  int id = 0;
  NodeId hap_id = kNoNode;  // kNoNode in the UAV-aided hierarchy
  std::array<double, 2> center{0, 0};
  double half_extent = 0;  // square region

  bool contains(double x, double y) const {
    return x >= center[0] - half_extent && x <= center[0] + half_extent &&
           y >= center[1] - half_extent && y <= center[1] + half_extent;
  }
  // Euclidean distance from (x, y) to the closed square; 0 inside.
  double outside_distance(double x, double y) const;
};

struct NetworkGraph {
  std::vector<Node> nodes;  // satellite, HAPs, TBSs, UAVs, users, in that order
  std::vector<Region> regions;

  NodeId satellite = kNoNode;
  std::vector<NodeId> haps;
  std::vector<NodeId> serving;  // TBSs then UAVs, ascending id
  std::vector<NodeId> users;

  const Node& node(NodeId id) const { return nodes.at(static_cast<size_t>(id)); }
  Node& node(NodeId id) { return nodes.at(static_cast<size_t>(id)); }

  std::vector<NodeId> serving_in_region(int region_id) const;
  std::vector<NodeId> users_in_region(int region_id) const;
  std::vector<NodeId> serving_under_hap(NodeId hap_id) const;

  // Position index of a node inside `serving` / `users` (for gain tables).
  int serving_pos(NodeId id) const;
  int user_pos(NodeId id) const;

  // Deterministic textual form; equal (config, seed) must give equal output.
  std::string serialize() const;
};

NetworkGraph build_topology(const ScenarioConfig& cfg, Rng& rng);

// Mean link gains per (serving node, user), indexed by the graph's
// serving/user positions.
struct LinkGainTable {
  int n_serving = 0;
  int n_users = 0;
  std::vector<double> gain;  // [serving_pos * n_users + user_pos]
  double at(int s, int u) const { return gain[static_cast<size_t>(s) * n_users + u]; }
};

struct AssociationResult {
  std::map<NodeId, NodeId> serving_of_user;
  std::vector<NodeId> degenerate_users;  // all-zero gains, fell back to nearest
};

// Strongest gain wins, subject to a per-node load cap of
// ceil(region_users / region_serving_nodes) + 2; ties to the lowest node id.
AssociationResult associate_users(const NetworkGraph& graph,
                                  const LinkGainTable& gains);

enum class UavMove { Stay = 0, North, South, East, West };
inline constexpr int kUavMoveCount = 5;
std::string to_string(UavMove m);

// Moves each listed UAV by one 10 m step, jitters every user position by
// zero-mean Gaussian noise (sigma 1 m per axis), and reports how far each UAV
// ended up outside its region square.
std::map<NodeId, double> step_mobility(NetworkGraph& graph,
                                       const std::map<NodeId, UavMove>& uav_moves,
                                       Rng& rng);

}  // namespace spectrumlab
