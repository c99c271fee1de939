#pragma once

#include <algorithm>
#include <optional>
#include <vector>

#include "proxygame/core/types.hpp"
#include "proxygame/utility.hpp"

namespace proxygame {

/// One client's decision for a stage. `use` is the proxy it will browse
/// through; `request` asks the distributor for k more proxies.
struct ClientAction {
  std::optional<ProxyId> use;
  bool request = false;
  /// Blocked proxies dropped from the pool this stage.
  std::uint32_t discarded = 0;
};

namespace detail {

inline void discard(ClientRecord& c, std::size_t index) {
  if (c.active_proxy == c.known_proxies[index]) c.active_proxy.reset();
  c.known_proxies.erase(c.known_proxies.begin() + static_cast<std::ptrdiff_t>(index));
  ++c.blocked_known_count;
}

/// A pooled proxy other than `except` that the client has never used.
inline bool holds_untried(const ClientRecord& c, std::optional<ProxyId> except) {
  return std::any_of(c.known_proxies.begin(), c.known_proxies.end(),
                     [&](ProxyId p) { return p != except && c.usage_of(p) == 0; });
}

}  // namespace detail

/// Benign censored client. Keeps its current proxy while it works; otherwise
/// probes the pool in grant order, dropping every blocked proxy it runs into,
/// and settles on the first one that still has room. It asks for more only
/// after losing a proxy with nothing untried left, or when the pool is empty,
/// so it never requests while holding an unused proxy.
inline ClientAction benign_step(ClientRecord& client, const std::vector<ProxyRecord>& proxies, Stage stage) {
  ClientAction act;
  if (client.active_proxy && proxies[*client.active_proxy].can_serve(client.id)) {
    act.use = client.active_proxy;
    return act;
  }

  // Probe the active proxy first, then the rest of the pool in order.
  if (client.active_proxy) {
    auto it = std::find(client.known_proxies.begin(), client.known_proxies.end(), *client.active_proxy);
    if (it != client.known_proxies.end() && it != client.known_proxies.begin())
      std::rotate(client.known_proxies.begin(), it, it + 1);
  }
  for (std::size_t i = 0; i < client.known_proxies.size();) {
    const ProxyRecord& p = proxies[client.known_proxies[i]];
    if (p.blocked) {
      detail::discard(client, i);
      ++act.discarded;
      continue;
    }
    if (p.can_serve(client.id)) {
      act.use = p.id;
      break;
    }
    ++i;
  }

  if (client.known_proxies.empty()) {
    act.request = true;
  } else if (act.discarded > 0) {
    act.request = !detail::holds_untried(client, act.use);
  }
  if (act.request && !act.use && !client.waiting_since) client.waiting_since = stage;
  return act;
}

/// Connects the client (if it is not already connected) and accrues one
/// stage of use. Returns false, leaving everything untouched, when the proxy
/// is blocked or full. The caller releases any previous connection first.
inline bool use_proxy(ClientRecord& client, ProxyRecord& proxy, Stage /*stage*/) {
  if (proxy.blocked) return false;
  if (!proxy.is_connected(client.id)) {
    if (!proxy.has_free_seat()) return false;
    proxy.connected.push_back(client.id);
  }
  client.add_usage(proxy.id);
  ++proxy.total_utilization;
  client.active_proxy = proxy.id;
  return true;
}

/// Leaves the connected set of the client's current proxy, if any.
inline void release_connection(ClientRecord& client, std::vector<ProxyRecord>& proxies) {
  if (!client.active_proxy) return;
  auto& conn = proxies[*client.active_proxy].connected;
  auto it = std::find(conn.begin(), conn.end(), client.id);
  if (it != conn.end()) conn.erase(it);
}

/// Directive from the censor: connect to a proxy, or idle when empty.
using AgentDirective = std::optional<ProxyId>;

/// Censoring agent. The censor tells it about every block, so blocked
/// proxies leave its pool at once. It connects only where directed and
/// requests a replacement the stage after its connected proxy is blocked,
/// even while holding untried proxies. An agent that has fallen below the
/// acceptance threshold is written off and stays idle.
inline ClientAction agent_step(ClientRecord& agent, const AgentDirective& directive,
                               const std::vector<ProxyRecord>& proxies, Stage stage, const UtilityParams& params) {
  ClientAction act;
  const std::optional<ProxyId> previous = agent.active_proxy;
  const bool lost_active = previous && proxies[*previous].blocked;
  for (std::size_t i = 0; i < agent.known_proxies.size();) {
    if (proxies[agent.known_proxies[i]].blocked) {
      detail::discard(agent, i);
      ++act.discarded;
    } else {
      ++i;
    }
  }

  if (directive && agent.knows(*directive) && proxies[*directive].can_serve(agent.id)) act.use = directive;

  if (proxy_utility_base(agent, params) < params.eta) return act;
  // The censor replaces only proxies its agents were using. An agent that
  // has never held a proxy keeps asking for its first batch.
  act.request = lost_active || (agent.known_proxies.empty() && agent.blocked_known_count == 0);
  if (act.request && !act.use && !agent.waiting_since) agent.waiting_since = stage;
  return act;
}

}  // namespace proxygame
