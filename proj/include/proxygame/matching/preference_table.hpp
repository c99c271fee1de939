#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "proxygame/matching/deferred_acceptance.hpp"

namespace proxygame::matching {

/// Fully materialized preferences. Applicants list providers best first;
/// providers list admissible applicants best first. Anything absent from a
/// list is unacceptable to that side.
struct PreferenceTable {
  struct Applicant {
    std::vector<std::size_t> preferences;
    std::size_t quota = 1;
  };
  struct Provider {
    std::vector<std::size_t> ranking;
    std::size_t quota = 1;
  };

  std::vector<Applicant> applicants;
  std::vector<Provider> providers;
};

/// Market view over a PreferenceTable with O(1) rank lookups.
class TableMarket {
 public:
  explicit TableMarket(const PreferenceTable& table) : table_(&table) {
    rank_.assign(table.providers.size(), std::vector<std::size_t>(table.applicants.size(), kUnranked));
    for (std::size_t p = 0; p < table.providers.size(); ++p) {
      const auto& order = table.providers[p].ranking;
      for (std::size_t r = 0; r < order.size(); ++r) {
        if (order[r] >= table.applicants.size()) throw std::out_of_range("provider ranks an unknown applicant");
        rank_[p][order[r]] = r;
      }
    }
    for (const auto& a : table.applicants)
      for (std::size_t p : a.preferences)
        if (p >= table.providers.size()) throw std::out_of_range("applicant lists an unknown provider");
  }

  [[nodiscard]] std::size_t applicant_count() const { return table_->applicants.size(); }
  [[nodiscard]] std::size_t provider_count() const { return table_->providers.size(); }
  [[nodiscard]] std::size_t applicant_quota(std::size_t a) const { return table_->applicants[a].quota; }
  [[nodiscard]] std::size_t provider_quota(std::size_t p) const { return table_->providers[p].quota; }

  [[nodiscard]] std::optional<std::size_t> choice(std::size_t a, std::size_t r) const {
    const auto& prefs = table_->applicants[a].preferences;
    if (r >= prefs.size()) return std::nullopt;
    return prefs[r];
  }

  /// Negated rank so that larger is better.
  [[nodiscard]] std::optional<long long> provider_score(std::size_t p, std::size_t a) const {
    const std::size_t r = rank_[p][a];
    if (r == kUnranked) return std::nullopt;
    return -static_cast<long long>(r);
  }

  /// Position of `a` in `p`'s ranking; nullopt when inadmissible.
  [[nodiscard]] std::optional<std::size_t> provider_rank(std::size_t p, std::size_t a) const {
    const std::size_t r = rank_[p][a];
    if (r == kUnranked) return std::nullopt;
    return r;
  }

 private:
  static constexpr std::size_t kUnranked = std::numeric_limits<std::size_t>::max();
  const PreferenceTable* table_;
  std::vector<std::vector<std::size_t>> rank_;
};

inline Matching deferred_acceptance(const PreferenceTable& table, DaStats* stats = nullptr) {
  TableMarket market(table);
  return deferred_acceptance(market, stats);
}

/// No blocking pair, every pair acceptable to both sides, quotas respected.
/// A pair (a, P) blocks when a lists P, does not hold it, and would take it
/// (a free seat or a worse held provider) while P would take a (a free seat
/// or a worse assigned applicant).
inline bool is_stable(const PreferenceTable& table, const Matching& m) {
  const std::size_t n_app = table.applicants.size();
  const std::size_t n_prov = table.providers.size();
  if (m.assignments.size() != n_app) return n_app == 0 && m.assignments.empty();
  TableMarket market(table);

  auto app_rank = [&](std::size_t a, std::size_t p) -> std::optional<std::size_t> {
    const auto& prefs = table.applicants[a].preferences;
    for (std::size_t r = 0; r < prefs.size(); ++r)
      if (prefs[r] == p) return r;
    return std::nullopt;
  };

  std::vector<std::vector<std::size_t>> assigned(n_prov);
  for (std::size_t a = 0; a < n_app; ++a) {
    const auto& held = m.assignments[a];
    if (held.size() > table.applicants[a].quota) return false;
    for (std::size_t i = 0; i < held.size(); ++i) {
      const std::size_t p = held[i];
      if (p >= n_prov) return false;
      for (std::size_t j = 0; j < i; ++j)
        if (held[j] == p) return false;
      if (!app_rank(a, p) || !market.provider_rank(p, a)) return false;
      assigned[p].push_back(a);
    }
  }
  for (std::size_t p = 0; p < n_prov; ++p)
    if (assigned[p].size() > table.providers[p].quota) return false;

  for (std::size_t a = 0; a < n_app; ++a) {
    const auto& held = m.assignments[a];
    std::size_t worst_held = 0;
    for (std::size_t p : held) worst_held = std::max(worst_held, *app_rank(a, p));
    const bool app_has_room = held.size() < table.applicants[a].quota;
    const auto& prefs = table.applicants[a].preferences;
    for (std::size_t r = 0; r < prefs.size(); ++r) {
      const std::size_t p = prefs[r];
      if (std::find(held.begin(), held.end(), p) != held.end()) continue;
      if (!app_has_room && r >= worst_held) continue;
      const auto pr = market.provider_rank(p, a);
      if (!pr) continue;
      if (assigned[p].size() < table.providers[p].quota) return false;
      for (std::size_t other : assigned[p])
        if (*market.provider_rank(p, other) > *pr) return false;
    }
  }
  return true;
}

}  // namespace proxygame::matching
