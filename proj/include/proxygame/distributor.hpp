#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "proxygame/core/config.hpp"
#include "proxygame/core/geometry.hpp"
#include "proxygame/core/random.hpp"
#include "proxygame/core/types.hpp"
#include "proxygame/core/world.hpp"
#include "proxygame/matching/deferred_acceptance.hpp"
#include "proxygame/matching/preference_table.hpp"
#include "proxygame/utility.hpp"

namespace proxygame {

/// Clients petitioning the distributor at one stage, ascending ids.
struct RequestBatch {
  Stage stage = 0;
  std::vector<ClientId> requesters;
  std::vector<ClientId> new_joiners;
};

/// Proxies granted at one stage, per requester, best first.
struct Grants {
  std::vector<std::pair<ClientId, std::vector<ProxyId>>> granted;

  [[nodiscard]] std::size_t total() const noexcept {
    std::size_t n = 0;
    for (const auto& [c, ps] : granted) n += ps.size();
    return n;
  }
};

/// Tie-broken utility score: utility first, then a per-pair coin that was
/// fixed before matching started.
struct RankScore {
  UtilityKey utility;
  std::uint64_t coin = 0;

  friend bool operator<(const RankScore& a, const RankScore& b) {
    auto c = a.utility <=> b.utility;
    if (c != 0) return c < 0;
    return a.coin < b.coin;
  }
  friend bool operator==(const RankScore&, const RankScore&) = default;
};

/// Preference structure of one distributor round. Applicants are the
/// admitted requesters, providers the unblocked proxies with free seats.
/// Applicant lists are sorted on demand in small chunks: deferred acceptance
/// rarely reads past the first few entries of a list over thousands of
/// proxies. Provider scores are computed per proposal.
class ProxyMarket {
 public:
  struct Side {
    std::vector<std::uint32_t> ids;
    std::vector<double> x, y;
    std::vector<int> sign;
    std::vector<double> log_abs;  // ln|utility base|
  };

  ProxyMarket(Side applicants, Side providers, std::vector<std::size_t> provider_quotas,
              std::size_t applicant_quota, std::vector<std::vector<std::pair<RankScore, std::size_t>>> candidates,
              double diagonal, double d_min, std::uint64_t provider_salt)
      : app_(std::move(applicants)),
        prov_(std::move(providers)),
        provider_quotas_(std::move(provider_quotas)),
        applicant_quota_(applicant_quota),
        candidates_(std::move(candidates)),
        sorted_(app_.ids.size(), 0),
        diagonal_(diagonal),
        d_min_(d_min),
        provider_salt_(provider_salt) {}

  [[nodiscard]] std::size_t applicant_count() const { return app_.ids.size(); }
  [[nodiscard]] std::size_t provider_count() const { return prov_.ids.size(); }
  [[nodiscard]] std::size_t applicant_quota(std::size_t) const { return applicant_quota_; }
  [[nodiscard]] std::size_t provider_quota(std::size_t p) const { return provider_quotas_[p]; }

  std::optional<std::size_t> choice(std::size_t a, std::size_t r) {
    auto& list = candidates_[a];
    if (r >= list.size()) return std::nullopt;
    if (r >= sorted_[a]) {
      const std::size_t upto = std::min(list.size(), std::max(r + 1, sorted_[a] + kChunk));
      auto better = [](const auto& x, const auto& y) { return y.first < x.first; };
      std::partial_sort(list.begin() + static_cast<std::ptrdiff_t>(sorted_[a]),
                        list.begin() + static_cast<std::ptrdiff_t>(upto), list.end(), better);
      sorted_[a] = upto;
    }
    return list[r].second;
  }

  /// Every admitted applicant is acceptable to every provider; the
  /// acceptance threshold was applied before the market was built.
  [[nodiscard]] std::optional<RankScore> provider_score(std::size_t p, std::size_t a) const {
    const double dx = app_.x[a] - prov_.x[p];
    const double dy = app_.y[a] - prov_.y[p];
    const double d = std::clamp(std::sqrt(dx * dx + dy * dy) / diagonal_, d_min_, 1.0);
    return RankScore{UtilityKey::of_log(app_.sign[a], app_.log_abs[a], 1.0 / d),
                     pair_coin(provider_salt_, prov_.ids[p], app_.ids[a])};
  }

  [[nodiscard]] const std::vector<ClientId>& applicants() const { return app_.ids; }
  [[nodiscard]] const std::vector<ProxyId>& providers() const { return prov_.ids; }

  /// Fully sorted explicit table; for inspection and stability checks.
  [[nodiscard]] matching::PreferenceTable to_table() {
    matching::PreferenceTable t;
    t.applicants.resize(applicant_count());
    t.providers.resize(provider_count());
    for (std::size_t a = 0; a < applicant_count(); ++a) {
      t.applicants[a].quota = applicant_quota_;
      for (std::size_t r = 0;; ++r) {
        auto p = choice(a, r);
        if (!p) break;
        t.applicants[a].preferences.push_back(*p);
      }
    }
    for (std::size_t p = 0; p < provider_count(); ++p) {
      t.providers[p].quota = provider_quotas_[p];
      std::vector<std::size_t> order(applicant_count());
      for (std::size_t a = 0; a < order.size(); ++a) order[a] = a;
      std::sort(order.begin(), order.end(),
                [&](std::size_t x, std::size_t y) { return *provider_score(p, y) < *provider_score(p, x); });
      t.providers[p].ranking = std::move(order);
    }
    return t;
  }

  static std::uint64_t pair_coin(std::uint64_t salt, std::uint64_t a, std::uint64_t b) {
    return mix64(salt ^ mix64((a << 32) | b));
  }

 private:
  static constexpr std::size_t kChunk = 8;

  Side app_;
  Side prov_;
  std::vector<std::size_t> provider_quotas_;
  std::size_t applicant_quota_;
  std::vector<std::vector<std::pair<RankScore, std::size_t>>> candidates_;
  std::vector<std::size_t> sorted_;
  double diagonal_;
  double d_min_;
  std::uint64_t provider_salt_;
};

/// Unblocked proxies with free seats this stage, ascending ids.
inline std::vector<ProxyId> eligible_proxies(const std::vector<ProxyRecord>& proxies) {
  std::vector<ProxyId> out;
  for (const auto& p : proxies)
    if (!p.blocked && p.has_free_seat()) out.push_back(p.id);
  return out;
}

/// Builds both sides' preferences. Requesters below the acceptance threshold
/// are left out entirely. Each admitted requester ranks the eligible proxies
/// it does not already know by client utility; each proxy ranks the admitted
/// requesters by proxy utility. Ties are broken by coins drawn here.
inline ProxyMarket build_preferences(const RequestBatch& batch, const std::vector<ClientRecord>& clients,
                                     const std::vector<ProxyRecord>& proxies, const SimConfig& cfg, Rng& rng) {
  const UtilityParams params = UtilityParams::from(cfg);
  const double diagonal = cfg.world_size * std::sqrt(2.0);

  ProxyMarket::Side app;
  for (ClientId id : batch.requesters) {
    const ClientRecord& c = clients[id];
    const double base = proxy_utility_base(c, params);
    if (base < params.eta) continue;
    app.ids.push_back(id);
    app.x.push_back(c.location.x);
    app.y.push_back(c.location.y);
    app.sign.push_back(base > 0 ? 1 : (base < 0 ? -1 : 0));
    app.log_abs.push_back(base != 0 ? std::log(std::abs(base)) : 0.0);
  }

  ProxyMarket::Side prov;
  prov.ids = eligible_proxies(proxies);
  std::vector<std::size_t> quotas;
  quotas.reserve(prov.ids.size());
  for (ProxyId id : prov.ids) {
    const auto& p = proxies[id];
    quotas.push_back(p.capacity - p.connected_count());
    prov.x.push_back(p.location.x);
    prov.y.push_back(p.location.y);
    const double importance = proxy_importance(p, params);
    prov.sign.push_back(importance > 0 ? 1 : 0);
    prov.log_abs.push_back(importance > 0 ? std::log(importance) : 0.0);
  }

  const std::uint64_t app_salt = rng();
  const std::uint64_t prov_salt = rng();

  std::vector<std::vector<std::pair<RankScore, std::size_t>>> candidates(app.ids.size());
  std::vector<ProxyId> known;
  for (std::size_t a = 0; a < app.ids.size(); ++a) {
    const ClientRecord& c = clients[app.ids[a]];
    known = c.known_proxies;
    std::sort(known.begin(), known.end());
    auto& list = candidates[a];
    list.reserve(prov.ids.size());
    for (std::size_t p = 0; p < prov.ids.size(); ++p) {
      if (!known.empty() && std::binary_search(known.begin(), known.end(), prov.ids[p])) continue;
      const double dx = app.x[a] - prov.x[p];
      const double dy = app.y[a] - prov.y[p];
      const double d = std::clamp(std::sqrt(dx * dx + dy * dy) / diagonal, cfg.d_min, 1.0);
      list.emplace_back(RankScore{UtilityKey::of_log(prov.sign[p], prov.log_abs[p], 1.0 / d),
                                  ProxyMarket::pair_coin(app_salt, c.id, prov.ids[p])},
                        p);
    }
  }
  return ProxyMarket(std::move(app), std::move(prov), std::move(quotas), cfg.k, std::move(candidates), diagonal,
                     cfg.d_min, prov_salt);
}

namespace detail {

/// Known, unblocked proxies the client has never used.
inline std::uint32_t untried_alive(const ClientRecord& c, const std::vector<ProxyRecord>& proxies) {
  std::uint32_t n = 0;
  for (ProxyId p : c.known_proxies)
    if (!proxies[p].blocked && c.usage_of(p) == 0) ++n;
  return n;
}

/// Request bookkeeping and grant application shared by both distributors.
inline void apply_grants(const RequestBatch& batch, const Grants& grants, WorldState& world) {
  std::vector<std::uint32_t> idle(batch.requesters.size());
  for (std::size_t i = 0; i < batch.requesters.size(); ++i)
    idle[i] = untried_alive(world.clients[batch.requesters[i]], world.proxies);

  for (const auto& [cid, ps] : grants.granted) {
    ClientRecord& c = world.clients[cid];
    for (ProxyId p : ps) {
      c.known_proxies.push_back(p);
      world.proxies[p].knowers.push_back(cid);
    }
    if (!ps.empty() && c.waiting_since) {
      if (!c.is_agent()) world.fulfilled_waits.push_back(batch.stage - *c.waiting_since);
      c.waiting_since.reset();
    }
  }
  for (std::size_t i = 0; i < batch.requesters.size(); ++i) {
    ClientRecord& c = world.clients[batch.requesters[i]];
    ++c.request_count;
    c.idle_unused_requests += idle[i];
  }
}

}  // namespace detail

/// One round of the game-theoretic distributor: preferences, deferred
/// acceptance, then grants and request bookkeeping. New joiners go through
/// the same round; their initial utility clears the threshold.
inline Grants assign(const RequestBatch& batch, WorldState& world, const SimConfig& cfg, Rng& rng) {
  Grants grants;
  if (batch.requesters.empty()) return grants;
  ProxyMarket market = build_preferences(batch, world.clients, world.proxies, cfg, rng);
  const matching::Matching m = matching::deferred_acceptance(market);
  for (std::size_t a = 0; a < market.applicant_count(); ++a) {
    if (m.assignments[a].empty()) continue;
    std::vector<ProxyId> ps;
    for (std::size_t p : m.assignments[a]) ps.push_back(market.providers()[p]);
    grants.granted.emplace_back(market.applicants()[a], std::move(ps));
  }
  detail::apply_grants(batch, grants, world);
  return grants;
}

/// Reference distributor: k uniformly random eligible proxies per requester,
/// no utilities and no threshold.
inline Grants assign_uniform_baseline(const RequestBatch& batch, WorldState& world, const SimConfig& cfg, Rng& rng) {
  Grants grants;
  if (batch.requesters.empty()) return grants;
  std::vector<ProxyId> eligible = eligible_proxies(world.proxies);
  std::vector<std::size_t> seats(world.proxies.size(), 0);
  for (ProxyId p : eligible) seats[p] = world.proxies[p].capacity - world.proxies[p].connected_count();

  for (ClientId cid : batch.requesters) {
    const ClientRecord& c = world.clients[cid];
    std::vector<ProxyId> pool;
    for (ProxyId p : eligible)
      if (seats[p] > 0 && !c.knows(p)) pool.push_back(p);
    std::vector<ProxyId> picked;
    for (std::size_t i = 0; i < cfg.k && i < pool.size(); ++i) {
      const std::size_t j = i + uniform_index(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      picked.push_back(pool[i]);
      --seats[pool[i]];
    }
    if (!picked.empty()) grants.granted.emplace_back(cid, std::move(picked));
  }
  detail::apply_grants(batch, grants, world);
  return grants;
}

}  // namespace proxygame
