#pragma once

#include <algorithm>
#include <cmath>

#include "proxygame/core/config.hpp"
#include "proxygame/core/random.hpp"
#include "proxygame/core/types.hpp"

namespace proxygame {

enum class Role { BenignClient, CensoringAgent, Proxy };

/// Benign clients fill the censored square, proxies the rest of the world.
/// Agents copy benign placement unless the censor is circumscribed, in which
/// case they share one small central square.
inline Location sample_location(Rng& rng, Role role, CensorGeography geography, const SimConfig& cfg) {
  auto square = [&](double half) { return Location{uniform(rng, -half, half), uniform(rng, -half, half)}; };
  switch (role) {
    case Role::BenignClient:
      return square(cfg.censored_region);
    case Role::CensoringAgent:
      return geography == CensorGeography::Circumscribed ? square(cfg.circumscribed_region)
                                                         : square(cfg.censored_region);
    case Role::Proxy:
      break;
  }
  const double half = cfg.world_size / 2;
  for (;;) {
    Location p = square(half);
    if (std::abs(p.x) > cfg.censored_region || std::abs(p.y) > cfg.censored_region) return p;
  }
}

inline bool inside_censored_region(const Location& p, const SimConfig& cfg) {
  return std::abs(p.x) <= cfg.censored_region && std::abs(p.y) <= cfg.censored_region;
}

/// Euclidean distance over the world diagonal, floored at d_min.
inline double normalized_distance(const Location& a, const Location& b, const SimConfig& cfg) {
  const double diagonal = cfg.world_size * std::sqrt(2.0);
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  const double d = std::sqrt(dx * dx + dy * dy) / diagonal;
  return std::clamp(d, cfg.d_min, 1.0);
}

}  // namespace proxygame
