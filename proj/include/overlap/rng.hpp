#pragma once

#include <cstdint>

namespace overlap {

// SplitMix64 (Steele, Lea, Flood 2014). Small, platform-independent,
// passes BigCrush; used everywhere a seeded stream is needed so that
// results are bit-reproducible across platforms and compilers.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform on the open interval (0,1); never returns an endpoint, so
  // inverse-cdf transforms stay finite.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Deterministic derivation of an independent stream (e.g. per-chunk or
  // per-replication seeds).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 g(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return g.next_u64();
  }

private:
  std::uint64_t state_;
};

} // namespace overlap
