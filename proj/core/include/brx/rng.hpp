#pragma once

#include <cstdint>

namespace brx {

// Counter-based generator: output i is a bijective 64-bit mix of (key, i).
// Jumping to any counter is O(1), and split() derives statistically
// independent streams from the same seed, so replication r of a simulation
// can always be reproduced in isolation regardless of thread layout.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(derive_key(seed, stream)) {}

  std::uint64_t next_u64() {
    std::uint64_t z = key_ + counter_++ * 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns 0 or 1, so quantile
  // transforms of unbounded densities stay finite.
  double next_double() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Child stream `stream`, decorrelated from this one and from other children.
  Rng split(std::uint64_t stream) const { return Rng(key_, stream + 1); }

  std::uint64_t key() const { return key_; }

 private:
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream) {
    // finalizer-style avalanche over seed, then fold the stream id in
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z ^= stream * 0xd1342543de82ef95ull + 0x2545f4914f6cdd1dull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace brx
