#pragma once

#include <cstdint>
#include <random>

namespace spectrumlab {

using Rng = std::mt19937_64;

// splitmix64 mix step; used to derive independent child seeds from one master
// seed so parallel components never share a stream.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline Rng make_rng(std::uint64_t seed, std::uint64_t tag = 0) {
  return Rng(mix_seed(seed, tag));
}

}  // namespace spectrumlab
