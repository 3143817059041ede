// Counter-based deterministic random number generation.
//
// Every stochastic routine in the library draws from a stateless stream
// addressed by (seed, stream, counter). A draw at a given address is a pure
// function of that address, so work can be partitioned across chunks or
// threads in any order and still reproduce bit-identical results for a fixed
// seed. The generator is the SplitMix64 finalizer applied to a per-stream
// base offset by the counter; streams are decorrelated by double-mixing the
// (seed, stream) pair.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace tomoregion::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// A stateless stream of 64-bit words: word(i) is independent of any other call.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t stream_id)
      : base_(mix64(mix64(seed + kGolden) ^ (stream_id * 0xda942042e4dd58b5ULL))) {}

  std::uint64_t word(std::uint64_t counter) const {
    return mix64(base_ + (counter + 1) * kGolden);
  }

  // Uniform double in [0, 1): 53 random mantissa bits.
  double uniform(std::uint64_t counter) const {
    return static_cast<double>(word(counter) >> 11) * 0x1.0p-53;
  }

  // Uniform double in (0, 1]: never returns zero (safe under log()).
  double uniform_open(std::uint64_t counter) const {
    return (static_cast<double>(word(counter) >> 11) + 1.0) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller. normal(2k) and normal(2k+1) share one
  // uniform pair, so a consumer needing n normals uses counters 0..n-1.
  double normal(std::uint64_t counter) const {
    const std::uint64_t pair = counter >> 1;
    const double u1 = uniform_open(2 * pair);
    const double u2 = uniform(2 * pair + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    return (counter & 1) ? r * std::sin(angle) : r * std::cos(angle);
  }

 private:
  std::uint64_t base_;
};

}  // namespace tomoregion::rng
