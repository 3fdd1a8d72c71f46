#pragma once

#include <cstdint>

namespace esdrl {

// Deterministic 64-bit generator (splitmix64) with hand-rolled
// distributions. std::mt19937 + std::*_distribution are
// implementation-defined, which would break the byte-identical
// reproducibility contract across toolchains; this keeps every draw
// a pure function of the seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  // Independent substream: hashes (seed, stream id) so training, resets
  // and exploration noise never share a sequence.
  static Rng stream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double uniform();

  // Uniform on [lo, hi).
  double uniform(double lo, double hi);

  // Standard normal via Box-Muller (two fresh uniforms per draw).
  double normal();

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);

 private:
  std::uint64_t state_;
};

}  // namespace esdrl
