#pragma once

#include <cstdint>
#include <random>

namespace proxygame {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to derive sub-stream seeds and cheap
/// deterministic tie-break keys.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// One run's randomness, split into independent named streams so that
/// toggling one stochastic feature leaves the others untouched.
struct RngStreams {
  Rng population;
  Rng tie_break;
  Rng censor_coins;
  Rng agent_assignment;
  Rng baseline;

  explicit RngStreams(std::uint64_t seed)
      : population(mix64(seed ^ 0x706f70ULL)),
        tie_break(mix64(seed ^ 0x746965ULL)),
        censor_coins(mix64(seed ^ 0x636f696eULL)),
        agent_assignment(mix64(seed ^ 0x6167656eULL)),
        baseline(mix64(seed ^ 0x62617365ULL)) {}
};

/// Uniform double in [0, 1) from the top 53 bits; identical on every
/// standard library, unlike std::uniform_real_distribution.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

inline double uniform(Rng& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Uniform integer in [0, n) by rejection; n > 0.
inline std::uint64_t uniform_index(Rng& rng, std::uint64_t n) {
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % n;
}

}  // namespace proxygame
