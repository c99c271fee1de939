#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "proxygame/core/config.hpp"
#include "proxygame/core/random.hpp"
#include "proxygame/core/types.hpp"
#include "proxygame/core/world.hpp"
#include "proxygame/distributor.hpp"
#include "proxygame/matching/hopcroft_karp.hpp"
#include "proxygame/utility.hpp"

namespace proxygame {

/// Per-proxy counts of the censor's own agents that drive the optimal
/// blocking score. Only agents still above the acceptance threshold count;
/// the rest are already written off and cannot lose anything more.
struct AgentPressure {
  /// Connected to the proxy: each would have to request a replacement.
  std::uint32_t connected = 0;
  /// Subset of `connected` already at the usage cap, so blocking costs them
  /// the request but no forgone usage.
  std::uint32_t connected_capped = 0;
  /// Holding the proxy in their pool, connected or not.
  std::uint32_t knowing = 0;
  /// Would drop below the acceptance threshold if the proxy were blocked.
  std::uint32_t would_be_lost = 0;
};

namespace detail {

inline bool agent_active(const ClientRecord& a, const UtilityParams& params) {
  return proxy_utility_base(a, params) >= params.eta;
}

/// Utility gained by one more stage of use.
inline double usage_gain(const ClientRecord& a, const UtilityParams& params) {
  const double t = static_cast<double>(a.total_usage);
  return params.alphas[0] * (std::min(t + 1.0, params.t_bar) - std::min(t, params.t_bar));
}

inline std::optional<ProxyId> connected_proxy(const ClientRecord& a, const std::vector<ProxyRecord>& proxies) {
  if (a.active_proxy && proxies[*a.active_proxy].is_connected(a.id)) return a.active_proxy;
  return std::nullopt;
}

}  // namespace detail

inline AgentPressure agent_pressure(ProxyId i, const WorldState& world, const UtilityParams& params) {
  AgentPressure pi;
  const ProxyRecord& proxy = world.proxies[i];
  const auto& alpha = params.alphas;
  for (ClientId id : proxy.knowers) {
    const ClientRecord& a = world.clients[id];
    if (!a.is_agent() || !a.knows(i) || !detail::agent_active(a, params)) continue;
    ++pi.knowing;
    const bool on_i = proxy.is_connected(id);
    if (on_i) {
      ++pi.connected;
      if (static_cast<double>(a.total_usage) >= params.t_bar) ++pi.connected_capped;
    }
    // Next-stage utility if i alone is blocked.
    double next = proxy_utility_base(a, params) - alpha[3];
    if (on_i) {
      next -= alpha[1];
    } else if (auto j = detail::connected_proxy(a, world.proxies); j && !world.proxies[*j].blocked) {
      next += detail::usage_gain(a, params);
    }
    if (next < params.eta) ++pi.would_be_lost;
  }
  return pi;
}

/// Marginal value to the censor of blocking proxy i now: connected users cut
/// off, against what its own agents lose.
inline double delta_phi(std::size_t connected_users, const AgentPressure& pi, const SimConfig& cfg) {
  const auto& a = cfg.alphas;
  const double agent_loss = (a[0] + a[1]) * pi.connected - a[0] * pi.connected_capped + a[3] * pi.knowing +
                            cfg.nu * pi.would_be_lost;
  return cfg.omegas[1] * static_cast<double>(connected_users) - cfg.omegas[0] * agent_loss;
}

inline double delta_phi(ProxyId i, const WorldState& world, const SimConfig& cfg) {
  return delta_phi(world.proxies[i].connected_count(), agent_pressure(i, world, UtilityParams::from(cfg)), cfg);
}

/// An agent's record one stage ahead, had the proxies in `blocks` been
/// blocked now. A connected agent keeps accruing usage unless its proxy is
/// blocked, in which case (while still admissible) it requests a
/// replacement; every blocked proxy it knows adds to its blocked count.
inline ClientRecord project_agent(const WorldState& world, ClientId id, const std::set<ProxyId>& blocks,
                                  const UtilityParams& params) {
  ClientRecord next = world.clients[id];
  const bool admissible = proxy_utility_base(next, params) >= params.eta;
  if (auto j = detail::connected_proxy(next, world.proxies); j && !world.proxies[*j].blocked) {
    if (blocks.count(*j) != 0) {
      if (admissible) ++next.request_count;
    } else {
      next.add_usage(*j);
    }
  }
  for (ProxyId p : world.clients[id].known_proxies)
    if (blocks.count(p) != 0 && !world.proxies[p].blocked) ++next.blocked_known_count;
  return next;
}

/// Censor objective one stage ahead under `blocks`: omega1 * sum of agent
/// payoffs - omega2 * users still connected to proxies the censor knows.
inline double censor_objective(const WorldState& world, const std::set<ProxyId>& blocks, const SimConfig& cfg) {
  const UtilityParams params = UtilityParams::from(cfg);
  double payoff = 0.0;
  for (ClientId id : world.censor.agents)
    payoff += censor_agent_payoff(project_agent(world, id, blocks, params), params);
  double connected = 0.0;
  for (const auto& [pid, disc] : world.censor.known) {
    const ProxyRecord& p = world.proxies[pid];
    if (p.blocked || blocks.count(pid) != 0) continue;
    connected += static_cast<double>(p.connected_count());
  }
  return cfg.omegas[0] * payoff - cfg.omegas[1] * connected;
}

/// Adds everything the distributor just handed to agents to the censor's
/// knowledge.
inline void ingest_reports(CensorState& censor, const Grants& grants, const WorldState& world) {
  censor.newly_learned.clear();
  for (const auto& [cid, ps] : grants.granted) {
    if (!world.clients[cid].is_agent()) continue;
    for (ProxyId p : ps) {
      if (censor.known.emplace(p, CensorState::Discovery{world.stage, cid}).second) censor.newly_learned.push_back(p);
    }
  }
}

/// Proxies to block at the end of this stage, ascending ids.
inline std::vector<ProxyId> decide_blocks(CensorState& censor, const WorldState& world, Stage stage,
                                          const SimConfig& cfg, Rng& rng) {
  std::vector<ProxyId> out;
  switch (cfg.censor.kind) {
    case CensorKind::Aggressive:
      for (ProxyId p : censor.newly_learned)
        if (!world.proxies[p].blocked) out.push_back(p);
      break;

    case CensorKind::Conservative:
      for (const auto& [p, disc] : censor.known) {
        if (world.proxies[p].blocked) continue;
        const ClientRecord& finder = world.clients[disc.agent];
        if (static_cast<double>(finder.total_usage) >= cfg.t_bar) {
          out.push_back(p);
        } else if (stage - disc.stage >= cfg.censor.wait && bernoulli(rng, cfg.censor.p)) {
          out.push_back(p);
        }
      }
      break;

    case CensorKind::Optimal: {
      const UtilityParams params = UtilityParams::from(cfg);
      for (const auto& [p, disc] : censor.known) {
        const ProxyRecord& proxy = world.proxies[p];
        if (proxy.blocked) continue;
        const double score = delta_phi(proxy.connected_count(), agent_pressure(p, world, params), cfg);
        censor.last_delta_phi[p] = score;
        if (score > 0) out.push_back(p);
      }
      break;
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Blocks take effect at once: the proxy drops everyone it was serving.
/// Clients find out on their next connection attempt.
inline void apply_blocks(WorldState& world, const std::vector<ProxyId>& blocks) {
  for (ProxyId p : blocks) {
    ProxyRecord& proxy = world.proxies[p];
    if (proxy.blocked) continue;
    proxy.blocked = true;
    proxy.blocked_at = world.stage;
    proxy.connected.clear();
    world.censor.blocked.push_back(p);
  }
}

/// Where each admissible agent connects next stage. A maximum bipartite
/// matching between agents and the unblocked proxies they hold spreads them
/// over as many distinct proxies as possible; the rest pick one of their own
/// proxies at random.
inline std::map<ClientId, ProxyId> assign_agents(const CensorState& censor, const WorldState& world,
                                                 const SimConfig& cfg, Rng& rng) {
  const UtilityParams params = UtilityParams::from(cfg);
  std::vector<ClientId> agents;
  std::vector<std::vector<ProxyId>> pools;
  std::vector<ProxyId> right;
  std::map<ProxyId, std::size_t> right_index;
  for (ClientId id : censor.agents) {
    const ClientRecord& a = world.clients[id];
    if (!detail::agent_active(a, params)) continue;
    std::vector<ProxyId> pool;
    for (ProxyId p : a.known_proxies)
      if (!world.proxies[p].blocked) pool.push_back(p);
    if (pool.empty()) continue;
    for (ProxyId p : pool)
      if (right_index.emplace(p, right.size()).second) right.push_back(p);
    agents.push_back(id);
    pools.push_back(std::move(pool));
  }

  std::vector<std::vector<std::size_t>> adj(agents.size());
  for (std::size_t i = 0; i < agents.size(); ++i)
    for (ProxyId p : pools[i]) adj[i].push_back(right_index.at(p));
  const auto matched = matching::hopcroft_karp(adj, right.size());

  std::map<ClientId, ProxyId> out;
  for (std::size_t i = 0; i < agents.size(); ++i) {
    if (matched[i]) {
      out.emplace(agents[i], right[*matched[i]]);
    } else {
      out.emplace(agents[i], pools[i][uniform_index(rng, pools[i].size())]);
    }
  }
  return out;
}

}  // namespace proxygame
