#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <limits>

#include "proxygame/core/config.hpp"
#include "proxygame/core/types.hpp"

namespace proxygame {

struct UtilityParams {
  std::array<double, 5> alphas{};
  std::array<double, 3> betas{};
  double t_bar = 0.0;
  double eta = 0.0;
  double nu = 0.0;

  static UtilityParams from(const SimConfig& cfg) {
    return UtilityParams{cfg.alphas, cfg.betas, cfg.t_bar, cfg.eta, cfg.nu};
  }
};

/// sign(b) * |b|^e.
inline double signed_power(double base, double exponent) {
  if (base == 0.0) return 0.0;
  const double mag = std::pow(std::abs(base), exponent);
  return base < 0 ? -mag : mag;
}

/// Order-preserving stand-in for signed_power(base, exponent) that never
/// overflows: 1/d reaches 1000 at the distance floor, far past what a double
/// holds once the base exceeds 2. Compares exactly like the value it encodes.
struct UtilityKey {
  int sign = 0;
  double log_magnitude = 0.0;  // exponent * ln|base|; unused when sign == 0

  static UtilityKey of(double base, double exponent) {
    if (base == 0.0) return {};
    return UtilityKey{base > 0 ? 1 : -1, exponent * std::log(std::abs(base))};
  }

  /// Pre-computed ln|base| variant for hot loops.
  static UtilityKey of_log(int sign, double log_abs_base, double exponent) {
    if (sign == 0) return {};
    return UtilityKey{sign, exponent * log_abs_base};
  }

  friend std::partial_ordering operator<=>(const UtilityKey& a, const UtilityKey& b) {
    if (a.sign != b.sign) return a.sign <=> b.sign;
    if (a.sign == 0) return std::partial_ordering::equivalent;
    return a.sign > 0 ? a.log_magnitude <=> b.log_magnitude : b.log_magnitude <=> a.log_magnitude;
  }
  friend bool operator==(const UtilityKey& a, const UtilityKey& b) {
    return (a <=> b) == std::partial_ordering::equivalent;
  }
};

/// Base of the client's utility for a proxy: beta-weighted knowers,
/// connected users and total utilization.
inline double proxy_importance(const ProxyRecord& proxy, const UtilityParams& params) {
  return params.betas[0] * static_cast<double>(proxy.knower_count()) +
         params.betas[1] * static_cast<double>(proxy.connected_count()) +
         params.betas[2] * static_cast<double>(proxy.total_utilization);
}

/// Client a's utility for proxy i: importance^(1/d).
inline double client_utility(const ProxyRecord& proxy, double distance, const UtilityParams& params) {
  return std::pow(proxy_importance(proxy, params), 1.0 / distance);
}

inline UtilityKey client_utility_key(const ProxyRecord& proxy, double distance, const UtilityParams& params) {
  return UtilityKey::of(proxy_importance(proxy, params), 1.0 / distance);
}

/// Distance-free proxy utility of a client. Also the censor's view u(a) of
/// its own agents and the quantity compared against the acceptance
/// threshold.
inline double proxy_utility_base(const ClientRecord& client, const UtilityParams& params) {
  const auto& a = params.alphas;
  return a[0] * std::min(static_cast<double>(client.total_usage), params.t_bar) -
         a[1] * static_cast<double>(client.request_count) -
         a[2] * static_cast<double>(client.idle_unused_requests) -
         a[3] * static_cast<double>(client.blocked_known_count) + a[4];
}

/// Proxy i's utility for client a: signed_power(base, 1/d).
inline double proxy_utility(const ClientRecord& client, double distance, const UtilityParams& params) {
  return signed_power(proxy_utility_base(client, params), 1.0 / distance);
}

inline UtilityKey proxy_utility_key(const ClientRecord& client, double distance, const UtilityParams& params) {
  return UtilityKey::of(proxy_utility_base(client, params), 1.0 / distance);
}

inline bool passes_threshold(const ClientRecord& client, const UtilityParams& params) {
  return proxy_utility_base(client, params) >= params.eta;
}

/// Payoff of one censoring agent: its utility while it stays admissible,
/// -nu once it has fallen below the threshold.
inline double agent_payoff(double base_utility, const UtilityParams& params) {
  return base_utility >= params.eta ? base_utility : -params.nu;
}

inline double censor_agent_payoff(const ClientRecord& agent, const UtilityParams& params) {
  return agent_payoff(proxy_utility_base(agent, params), params);
}

}  // namespace proxygame
