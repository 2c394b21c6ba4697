#pragma once

#include <cstdint>
#include <span>

namespace rdelab {

// Counter-based deterministic randomness. Every random draw in the library is
// keyed by (seed, purpose, identifiers) through hash chains, so results do
// not depend on evaluation order or thread count.
namespace salt {
inline constexpr std::uint64_t kTreeNoise = 0x01;
inline constexpr std::uint64_t kBoundaryA = 0x02;
inline constexpr std::uint64_t kBoundaryB = 0x03;
inline constexpr std::uint64_t kSample = 0x04;
inline constexpr std::uint64_t kParticle = 0x05;
inline constexpr std::uint64_t kScanStart = 0x06;
inline constexpr std::uint64_t kStart = 0x07;
}  // namespace salt

// splitmix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : state_(mix64(seed)) {}

  // Independent stream keyed by `key`; used to address samples, tree nodes,
  // particles. Chaining derive() over a word of letters keys a tree node.
  CounterRng derive(std::uint64_t key) const {
    CounterRng r(0);
    r.state_ = mix64(state_ ^ mix64(key ^ 0xd1b54a32d192ed03ULL));
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0,1) with 53 random bits.
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform on {0,...,n-1} via 128-bit multiply; avoids modulo bias.
  int next_index(int n) {
    return int((unsigned __int128)(next_u64()) * (unsigned __int128)(n) >> 64);
  }

  // Index of the first cumulative weight exceeding a uniform draw.
  // `cumulative` is nondecreasing with last entry ~1; the last index absorbs
  // any float shortfall.
  int next_categorical(std::span<const double> cumulative) {
    double u = next_unit();
    for (std::size_t i = 0; i + 1 < cumulative.size(); ++i) {
      if (u < cumulative[i]) return int(i);
    }
    return int(cumulative.size()) - 1;
  }

 private:
  std::uint64_t state_;
};

}  // namespace rdelab
