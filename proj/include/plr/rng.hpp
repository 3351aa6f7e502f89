#pragma once

#include <cstdint>

namespace plr {

// SplitMix64 avalanche (Steele, Lea, Flood 2014). Fixed here as the seeding
// contract: ensembles are portable across platforms and thread schedules.
inline constexpr std::uint64_t splitmix64_mix(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline constexpr std::uint64_t kGolden64 = 0x9e3779b97f4a7c15ULL;

// Per-realization stream seed: seed_i = mix(master + (i + 1) * golden).
inline constexpr std::uint64_t derive_seed(std::uint64_t master_seed,
                                           std::uint64_t realization_index) {
  return splitmix64_mix(master_seed + (realization_index + 1) * kGolden64);
}

// Minimal counter-based generator; one instance per realization.
class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGolden64;
    return splitmix64_mix(state_);
  }

  // uniform on the open interval (0, 1), symmetric about 1/2
  double next_unit() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

  // uniform on (-halfwidth, halfwidth), zero mean by symmetry
  double next_symmetric(double halfwidth) { return halfwidth * (2.0 * next_unit() - 1.0); }

 private:
  std::uint64_t state_;
};

}  // namespace plr
