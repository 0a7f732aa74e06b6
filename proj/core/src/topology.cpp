#include "spectrumlab/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <tuple>

#include "spectrumlab/defaults.hpp"
#include "spectrumlab/errors.hpp"

namespace spectrumlab {

std::string to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Satellite: return "satellite";
    case NodeKind::Hap: return "hap";
    case NodeKind::Tbs: return "tbs";
    case NodeKind::Uav: return "uav";
    case NodeKind::User: return "user";
  }
  return "?";
}

std::string to_string(UavMove m) {
  switch (m) {
    case UavMove::Stay: return "stay";
    case UavMove::North: return "north";
    case UavMove::South: return "south";
    case UavMove::East: return "east";
    case UavMove::West: return "west";
  }
  return "?";
}

double Region::outside_distance(double x, double y) const {
  double dx = std::max(0.0, std::abs(x - center[0]) - half_extent);
  double dy = std::max(0.0, std::abs(y - center[1]) - half_extent);
  return std::hypot(dx, dy);
}

std::vector<NodeId> NetworkGraph::serving_in_region(int region_id) const {
  std::vector<NodeId> out;
  for (NodeId id : serving)
    if (node(id).region_id == region_id) out.push_back(id);
  return out;
}

std::vector<NodeId> NetworkGraph::users_in_region(int region_id) const {
  std::vector<NodeId> out;
  for (NodeId id : users)
    if (node(id).region_id == region_id) out.push_back(id);
  return out;
}

std::vector<NodeId> NetworkGraph::serving_under_hap(NodeId hap_id) const {
  std::vector<NodeId> out;
  for (const Region& r : regions) {
    if (r.hap_id != hap_id) continue;
    for (NodeId id : serving)
      if (node(id).region_id == r.id) out.push_back(id);
  }
  std::sort(out.begin(), out.end());
  return out;
}

int NetworkGraph::serving_pos(NodeId id) const {
  auto it = std::lower_bound(serving.begin(), serving.end(), id);
  if (it == serving.end() || *it != id)
    throw DomainError("node is not a serving node: " + std::to_string(id));
  return static_cast<int>(it - serving.begin());
}

int NetworkGraph::user_pos(NodeId id) const {
  auto it = std::lower_bound(users.begin(), users.end(), id);
  if (it == users.end() || *it != id)
    throw DomainError("node is not a user: " + std::to_string(id));
  return static_cast<int>(it - users.begin());
}

std::string NetworkGraph::serialize() const {
  std::ostringstream ss;
  char buf[160];
  for (const Region& r : regions) {
    std::snprintf(buf, sizeof buf, "region %d hap=%d center=%.6f,%.6f half=%.6f\n",
                  r.id, r.hap_id, r.center[0], r.center[1], r.half_extent);
    ss << buf;
  }
  for (const Node& n : nodes) {
    std::snprintf(buf, sizeof buf,
                  "node %d %s pos=%.9e,%.9e,%.9e tx=%.6f beam=%d region=%d\n",
                  n.id, to_string(n.kind).c_str(), n.position[0], n.position[1],
                  n.position[2], n.tx_power_w, n.beam_id, n.region_id);
    ss << buf;
  }
  return ss.str();
}

NetworkGraph build_topology(const ScenarioConfig& cfg, Rng& rng) {
  cfg.validate();
  namespace d = defaults;

  NetworkGraph g;
  const int n_regions = cfg.region_count();
  const double he = d::kRegionHalfExtentM;

  // Regions in a row along x, symmetric about the origin.
  g.regions.resize(static_cast<size_t>(n_regions));
  for (int r = 0; r < n_regions; ++r) {
    g.regions[r].id = r;
    g.regions[r].center = {(r - (n_regions - 1) / 2.0) * 2.0 * he, 0.0};
    g.regions[r].half_extent = he;
  }

  auto add_node = [&](NodeKind kind, std::array<double, 3> pos, double tx,
                      int beam, int region) {
    Node n;
    n.id = static_cast<NodeId>(g.nodes.size());
    n.kind = kind;
    n.position = pos;
    n.tx_power_w = tx;
    n.power_budget_w = tx;
    n.beam_id = beam;
    n.region_id = region;
    g.nodes.push_back(n);
    return n.id;
  };

  if (cfg.has_satellite())
    g.satellite = add_node(NodeKind::Satellite, {0, 0, cfg.sat_altitude_m},
                           d::kSatPowerW, 0, -1);

  // HAPs sit above the centroid of their regions; HAP h covers regions
  // [h*regions_per_hap, (h+1)*regions_per_hap); beams group HAPs evenly.
  if (cfg.has_haps()) {
    for (int h = 0; h < cfg.hap_count(); ++h) {
      double cx = 0;
      for (int k = 0; k < cfg.regions_per_hap; ++k)
        cx += g.regions[h * cfg.regions_per_hap + k].center[0];
      cx /= cfg.regions_per_hap;
      NodeId id = add_node(NodeKind::Hap, {cx, 0, cfg.hap_altitude_m}, 0,
                           h / cfg.haps_per_beam, -1);
      g.haps.push_back(id);
      for (int k = 0; k < cfg.regions_per_hap; ++k)
        g.regions[h * cfg.regions_per_hap + k].hap_id = id;
    }
  }

  auto region_beam = [&](int r) {
    if (!cfg.has_haps()) return 0;
    return g.node(g.regions[r].hap_id).beam_id;
  };

  // TBSs on a fixed grid along x inside each region.
  for (int r = 0; r < n_regions; ++r) {
    const Region& reg = g.regions[r];
    for (int i = 0; i < cfg.tbs_per_region; ++i) {
      double off = he * ((2.0 * i + 1.0) / cfg.tbs_per_region - 1.0);
      NodeId id = add_node(NodeKind::Tbs, {reg.center[0] + off, reg.center[1], 0.0},
                           d::kTbsPowerW, region_beam(r), r);
      g.serving.push_back(id);
    }
  }
  // UAVs spread along y, at the region centre when there is a single one.
  for (int r = 0; r < n_regions; ++r) {
    const Region& reg = g.regions[r];
    for (int i = 0; i < cfg.uavs_per_region; ++i) {
      double off = he * ((2.0 * i + 1.0) / cfg.uavs_per_region - 1.0);
      if (cfg.uavs_per_region == 1) off = 0.0;
      NodeId id = add_node(NodeKind::Uav,
                           {reg.center[0], reg.center[1] + off, cfg.uav_altitude_m},
                           d::kUavPowerW, region_beam(r), r);
      g.serving.push_back(id);
    }
  }

  // Users uniform in their region square; count uniform-integer in the range.
  std::uniform_int_distribution<int> count_dist(cfg.users_per_region_range[0],
                                                cfg.users_per_region_range[1]);
  for (int r = 0; r < n_regions; ++r) {
    const Region& reg = g.regions[r];
    int n_users = count_dist(rng);
    std::uniform_real_distribution<double> ux(reg.center[0] - he, reg.center[0] + he);
    std::uniform_real_distribution<double> uy(reg.center[1] - he, reg.center[1] + he);
    for (int i = 0; i < n_users; ++i) {
      double x = ux(rng);
      double y = uy(rng);
      NodeId id = add_node(NodeKind::User, {x, y, 0.0}, 0.0, region_beam(r), r);
      g.users.push_back(id);
    }
  }

  std::sort(g.serving.begin(), g.serving.end());
  return g;
}

AssociationResult associate_users(const NetworkGraph& graph,
                                  const LinkGainTable& gains) {
  AssociationResult res;

  std::map<NodeId, int> load;
  std::map<int, int> region_cap;
  for (const Region& r : graph.regions) {
    int n_users = static_cast<int>(graph.users_in_region(r.id).size());
    int n_nodes = static_cast<int>(graph.serving_in_region(r.id).size());
    if (n_nodes == 0) throw DomainError("region without serving nodes");
    region_cap[r.id] = (n_users + n_nodes - 1) / n_nodes + 2;
  }

  // Greedy over (gain desc, node id asc, user id asc): strongest gain wins
  // while the load cap allows it.
  struct Cand {
    double gain;
    NodeId node;
    NodeId user;
  };
  std::vector<Cand> cands;
  std::vector<NodeId> zero_gain_users;
  for (NodeId u : graph.users) {
    const Node& user = graph.node(u);
    double best = 0;
    for (NodeId s : graph.serving) {
      if (graph.node(s).region_id != user.region_id) continue;
      double gn = gains.at(graph.serving_pos(s), graph.user_pos(u));
      best = std::max(best, gn);
      cands.push_back({gn, s, u});
    }
    if (best <= 0) zero_gain_users.push_back(u);
  }
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    return std::tie(b.gain, a.node, a.user) < std::tie(a.gain, b.node, b.user);
  });

  for (const Cand& c : cands) {
    if (c.gain <= 0) continue;
    if (res.serving_of_user.count(c.user)) continue;
    int region = graph.node(c.user).region_id;
    if (load[c.node] >= region_cap[region]) continue;
    res.serving_of_user[c.user] = c.node;
    ++load[c.node];
  }

  // Users whose gains were all zero: nearest node with spare capacity.
  for (NodeId u : zero_gain_users) {
    if (res.serving_of_user.count(u)) continue;
    const Node& user = graph.node(u);
    NodeId best = kNoNode;
    double best_d = 0;
    for (NodeId s : graph.serving) {
      const Node& sn = graph.node(s);
      if (sn.region_id != user.region_id) continue;
      if (load[s] >= region_cap[user.region_id]) continue;
      double dx = sn.position[0] - user.position[0];
      double dy = sn.position[1] - user.position[1];
      double dz = sn.position[2] - user.position[2];
      double dist = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (best == kNoNode || dist < best_d) {
        best = s;
        best_d = dist;
      }
    }
    if (best == kNoNode) throw DomainError("no capacity left for degenerate user");
    res.serving_of_user[u] = best;
    ++load[best];
    res.degenerate_users.push_back(u);
  }

  return res;
}

std::map<NodeId, double> step_mobility(NetworkGraph& graph,
                                       const std::map<NodeId, UavMove>& uav_moves,
                                       Rng& rng) {
  namespace d = defaults;
  for (const auto& [id, move] : uav_moves) {
    if (graph.node(id).kind != NodeKind::Uav)
      throw ProtocolError("mobility move for non-UAV node " + std::to_string(id));
    Node& n = graph.node(id);
    switch (move) {
      case UavMove::North: n.position[1] += d::kUavStepM; break;
      case UavMove::South: n.position[1] -= d::kUavStepM; break;
      case UavMove::East: n.position[0] += d::kUavStepM; break;
      case UavMove::West: n.position[0] -= d::kUavStepM; break;
      case UavMove::Stay: break;
    }
  }

  std::normal_distribution<double> jitter(0.0, d::kUserJitterSigmaM);
  for (NodeId u : graph.users) {
    Node& n = graph.node(u);
    n.position[0] += jitter(rng);
    n.position[1] += jitter(rng);
  }

  std::map<NodeId, double> outside;
  for (NodeId id : graph.serving) {
    const Node& n = graph.node(id);
    if (n.kind != NodeKind::Uav) continue;
    const Region& reg = graph.regions[static_cast<size_t>(n.region_id)];
    outside[id] = reg.outside_distance(n.position[0], n.position[1]);
  }
  return outside;
}

}  // namespace spectrumlab
