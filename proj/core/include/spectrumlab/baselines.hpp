#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "spectrumlab/hier_env.hpp"

namespace spectrumlab {

enum class BaselineKind { Exhaustive, Random, FlatPpo, IndependentMappo };

// Uniform over each due tier's hierarchy-valid action space.
class RandomPolicy {
 public:
  explicit RandomPolicy(std::uint64_t seed) : rng_(make_rng(seed, 11)) {}
  TierActions decide(const HierEnv& env);

 private:
  Rng rng_;
};

// Thrown when the joint due-action space exceeds the exhaustive cap.
class ExhaustiveCapExceeded : public std::runtime_error {
 public:
  ExhaustiveCapExceeded(const std::string& sizing)
      : std::runtime_error("exhaustive search refused: " + sizing) {}
};

// Myopic per-epoch search: enumerates the joint action space of the tiers due
// this slot, scores each candidate's immediate global-scope slot value on the
// frozen channel snapshot, and returns the maximiser (ties to the lowest
// joint index).  Enumeration may be split across threads; the argmax
// reduction is deterministic regardless of the split.
class ExhaustivePolicy {
 public:
  ExhaustivePolicy(std::uint64_t cap, int threads)
      : cap_(cap), threads_(std::max(1, threads)) {}

  TierActions decide(const HierEnv& env) const;

  // Joint cardinality of the due tiers at the env's current slot.
  static ActionIndex joint_cardinality(const HierEnv& env);

 private:
  std::uint64_t cap_;
  int threads_;
};

}  // namespace spectrumlab
