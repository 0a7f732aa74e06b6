#include "spectrumlab/allocation.hpp"

#include <algorithm>

#include "spectrumlab/errors.hpp"

namespace spectrumlab {

std::string action_index_to_string(ActionIndex v) {
  if (v == 0) return "0";
  std::string out;
  while (v > 0) {
    out.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

int absolute_subband_index(const AllocationState::NodeBand& band, int subbands) {
  return band.chunk * subbands + band.subband;
}

int absolute_channel_index(const AllocationState::NodeBand& band, int channel,
                           int subbands, int channels_per_subband) {
  return absolute_subband_index(band, subbands) * channels_per_subband + channel;
}

AllocationState::NodeBand resolve_subband_digit(const std::vector<int>& owned_chunks,
                                                int digit, int subbands) {
  if (owned_chunks.empty()) throw DomainError("beam owns no chunks");
  int k = static_cast<int>(owned_chunks.size());
  int pos = digit * k;  // spreads the S choices over the owned k*S grid
  AllocationState::NodeBand band;
  band.digit = digit;
  band.chunk = owned_chunks[static_cast<size_t>(pos / subbands)];
  band.subband = pos % subbands;
  return band;
}

ValidationReport validate_hierarchy(const AllocationState& alloc,
                                    const NetworkGraph& graph,
                                    const ScenarioConfig& cfg,
                                    const std::map<NodeId, NodeId>& serving_of_user) {
  ValidationReport report;
  auto violate = [&](const std::string& tier, const std::string& detail) {
    for (const auto& v : report.violations)
      if (v.tier == tier) return;  // first violating entity per tier
    report.ok = false;
    report.violations.push_back({tier, detail});
  };

  // Global: owned chunk sets must partition {0..F-1}.
  std::vector<int> owner(static_cast<size_t>(cfg.chunks), -1);
  if (static_cast<int>(alloc.beam_chunks.size()) != cfg.beams) {
    violate("global", "beam_chunks has " +
                          std::to_string(alloc.beam_chunks.size()) +
                          " beams, expected " + std::to_string(cfg.beams));
  } else {
    for (int b = 0; b < cfg.beams && report.ok; ++b) {
      for (int c : alloc.beam_chunks[static_cast<size_t>(b)]) {
        if (c < 0 || c >= cfg.chunks) {
          violate("global", "beam " + std::to_string(b) + " owns chunk " +
                                std::to_string(c) + " outside [0," +
                                std::to_string(cfg.chunks) + ")");
          break;
        }
        if (owner[static_cast<size_t>(c)] != -1) {
          violate("global", "chunk " + std::to_string(c) + " owned by beams " +
                                std::to_string(owner[static_cast<size_t>(c)]) +
                                " and " + std::to_string(b));
          break;
        }
        owner[static_cast<size_t>(c)] = b;
      }
    }
    for (int c = 0; c < cfg.chunks; ++c) {
      if (owner[static_cast<size_t>(c)] == -1) {
        violate("global", "chunk " + std::to_string(c) + " unowned");
        break;
      }
    }
  }

  // Regional: each node's sub-band must lie in a chunk its beam owns.
  for (NodeId id : graph.serving) {
    auto it = alloc.node_band.find(id);
    if (it == alloc.node_band.end()) {
      violate("regional", "node " + std::to_string(id) + " has no sub-band");
      break;
    }
    const auto& band = it->second;
    if (band.subband < 0 || band.subband >= cfg.subbands ||
        band.digit < 0 || band.digit >= cfg.subbands) {
      violate("regional", "node " + std::to_string(id) + " sub-band index " +
                              std::to_string(band.subband) + " out of range");
      break;
    }
    int beam = graph.node(id).beam_id;
    if (band.chunk < 0 || band.chunk >= cfg.chunks ||
        owner[static_cast<size_t>(band.chunk)] != beam) {
      violate("regional", "node " + std::to_string(id) + " sub-band in chunk " +
                              std::to_string(band.chunk) +
                              " not owned by beam " + std::to_string(beam));
      break;
    }
  }

  // Local: channel and power digits in range for every associated user.
  for (const auto& [user, serving] : serving_of_user) {
    auto it = alloc.user_alloc.find(user);
    if (it == alloc.user_alloc.end()) {
      violate("local", "user " + std::to_string(user) + " has no allocation");
      break;
    }
    if (!alloc.node_band.count(serving)) {
      violate("local", "user " + std::to_string(user) +
                           " served by node without sub-band");
      break;
    }
    const auto& ua = it->second;
    if (ua.channel < 0 || ua.channel >= cfg.channels_per_subband) {
      violate("local", "user " + std::to_string(user) + " channel " +
                           std::to_string(ua.channel) + " outside [0," +
                           std::to_string(cfg.channels_per_subband) + ")");
      break;
    }
    if (ua.power_level < 1 || ua.power_level > cfg.power_levels) {
      violate("local", "user " + std::to_string(user) + " power level " +
                           std::to_string(ua.power_level) + " outside [1," +
                           std::to_string(cfg.power_levels) + "]");
      break;
    }
  }

  return report;
}

namespace {

// Number of compositions of n over k nonnegative parts: C(n+k-1, k-1).
ActionIndex compositions(int n, int k) {
  if (n < 0) return 0;
  if (k <= 0) return n == 0 ? 1 : 0;
  ActionIndex num = 1;
  // C(n+k-1, k-1) computed multiplicatively; integral at every step.
  for (int i = 1; i <= k - 1; ++i) {
    num = num * static_cast<unsigned>(n + i);
    num = num / static_cast<unsigned>(i);
  }
  return num;
}

}  // namespace

ActionIndex GlobalActionSpace::cardinality() const {
  return compositions(chunks, beams);
}

std::vector<int> GlobalActionSpace::decode(ActionIndex index) const {
  if (index >= cardinality())
    throw DomainError("global action index out of range");
  std::vector<int> counts(static_cast<size_t>(beams), 0);
  int remaining = chunks;
  for (int b = 0; b < beams - 1; ++b) {
    for (int k = 0; k <= remaining; ++k) {
      ActionIndex tail = compositions(remaining - k, beams - b - 1);
      if (index < tail) {
        counts[static_cast<size_t>(b)] = k;
        remaining -= k;
        break;
      }
      index -= tail;
    }
  }
  counts[static_cast<size_t>(beams - 1)] = remaining;
  return counts;
}

ActionIndex GlobalActionSpace::encode(const std::vector<int>& counts) const {
  if (static_cast<int>(counts.size()) != beams)
    throw DomainError("global action needs one chunk count per beam");
  int total = 0;
  for (int c : counts) {
    if (c < 0) throw DomainError("chunk counts must be nonnegative");
    total += c;
  }
  if (total != chunks) throw DomainError("chunk counts must sum to F");
  ActionIndex index = 0;
  int remaining = chunks;
  for (int b = 0; b < beams - 1; ++b) {
    for (int k = 0; k < counts[static_cast<size_t>(b)]; ++k)
      index += compositions(remaining - k, beams - b - 1);
    remaining -= counts[static_cast<size_t>(b)];
  }
  return index;
}

std::vector<int> GlobalActionSpace::head_sizes() const {
  return std::vector<int>(static_cast<size_t>(std::max(0, beams - 1)), chunks + 1);
}

ActionIndex RegionalActionSpace::cardinality() const {
  ActionIndex card = 1;
  for (size_t i = 0; i < nodes.size(); ++i) card *= static_cast<unsigned>(subbands);
  return card;
}

std::vector<int> RegionalActionSpace::decode(ActionIndex index) const {
  if (index >= cardinality())
    throw DomainError("regional action index out of range");
  std::vector<int> digits(nodes.size(), 0);
  for (size_t i = nodes.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % static_cast<unsigned>(subbands));
    index /= static_cast<unsigned>(subbands);
  }
  return digits;
}

ActionIndex RegionalActionSpace::encode(const std::vector<int>& digits) const {
  if (digits.size() != nodes.size())
    throw DomainError("regional action needs one digit per node");
  ActionIndex index = 0;
  for (int d : digits) {
    if (d < 0 || d >= subbands) throw DomainError("sub-band digit out of range");
    index = index * static_cast<unsigned>(subbands) + static_cast<unsigned>(d);
  }
  return index;
}

std::vector<int> RegionalActionSpace::head_sizes() const {
  return std::vector<int>(nodes.size(), subbands);
}

ActionIndex LocalActionSpace::cardinality() const {
  ActionIndex card = 1;
  unsigned per_user = static_cast<unsigned>(channels) * static_cast<unsigned>(power_levels);
  for (size_t i = 0; i < users.size(); ++i) card *= per_user;
  if (has_move) card *= static_cast<unsigned>(kUavMoveCount);
  return card;
}

LocalAction LocalActionSpace::decode(ActionIndex index) const {
  if (index >= cardinality()) throw DomainError("local action index out of range");
  LocalAction action;
  if (has_move) {
    action.move = static_cast<UavMove>(
        static_cast<int>(index % static_cast<unsigned>(kUavMoveCount)));
    index /= static_cast<unsigned>(kUavMoveCount);
  }
  unsigned per_user = static_cast<unsigned>(channels) * static_cast<unsigned>(power_levels);
  action.per_user.resize(users.size());
  for (size_t i = users.size(); i-- > 0;) {
    int digit = static_cast<int>(index % per_user);
    index /= per_user;
    action.per_user[i].channel = digit / power_levels;
    action.per_user[i].power_level = digit % power_levels + 1;
  }
  return action;
}

ActionIndex LocalActionSpace::encode(const LocalAction& action) const {
  if (action.per_user.size() != users.size())
    throw DomainError("local action needs one (channel, power) per user");
  ActionIndex index = 0;
  unsigned per_user = static_cast<unsigned>(channels) * static_cast<unsigned>(power_levels);
  for (const auto& ua : action.per_user) {
    if (ua.channel < 0 || ua.channel >= channels)
      throw DomainError("channel digit out of range");
    if (ua.power_level < 1 || ua.power_level > power_levels)
      throw DomainError("power level out of range");
    index = index * per_user +
            static_cast<unsigned>(ua.channel * power_levels + ua.power_level - 1);
  }
  if (has_move)
    index = index * static_cast<unsigned>(kUavMoveCount) +
            static_cast<unsigned>(action.move);
  return index;
}

std::vector<int> LocalActionSpace::head_sizes(int max_users) const {
  std::vector<int> heads;
  for (int i = 0; i < max_users; ++i) {
    heads.push_back(channels);
    heads.push_back(power_levels);
  }
  if (has_move) heads.push_back(kUavMoveCount);
  return heads;
}

}  // namespace spectrumlab
