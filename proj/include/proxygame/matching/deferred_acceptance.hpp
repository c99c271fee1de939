#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <deque>
#include <optional>
#include <vector>

namespace proxygame::matching {

/// A two-sided market with quotas on both sides. Applicants expose their
/// preference list one position at a time so callers can sort lazily;
/// providers score applicants, higher is better, nullopt means "never
/// admit". Scores must be strict within one provider.
template <class M>
concept Market = requires(M& m, std::size_t a, std::size_t p, std::size_t r) {
  { m.applicant_count() } -> std::convertible_to<std::size_t>;
  { m.provider_count() } -> std::convertible_to<std::size_t>;
  { m.applicant_quota(a) } -> std::convertible_to<std::size_t>;
  { m.provider_quota(p) } -> std::convertible_to<std::size_t>;
  { m.choice(a, r) } -> std::convertible_to<std::optional<std::size_t>>;
  { *m.provider_score(p, a) < *m.provider_score(p, a) } -> std::convertible_to<bool>;
};

/// Result of one deferred-acceptance round, indexed by applicant. Each
/// applicant's providers are listed best first.
struct Matching {
  std::vector<std::vector<std::size_t>> assignments;

  [[nodiscard]] std::size_t size() const noexcept {
    std::size_t n = 0;
    for (const auto& s : assignments) n += s.size();
    return n;
  }

  friend bool operator==(const Matching&, const Matching&) = default;
};

struct DaStats {
  std::size_t proposals = 0;
};

/// Applicant-proposing deferred acceptance generalized to applicant quotas.
/// Every applicant keeps proposing down its list until it tentatively holds
/// its quota or runs out of providers; each provider keeps its best
/// `provider_quota` proposers and rejects the rest.
template <Market M>
Matching deferred_acceptance(M& market, DaStats* stats = nullptr) {
  const std::size_t n_app = market.applicant_count();
  const std::size_t n_prov = market.provider_count();

  using Score = std::remove_cvref_t<decltype(*market.provider_score(std::size_t{}, std::size_t{}))>;
  struct Held {
    Score score;
    std::size_t applicant;
    std::size_t rank;  // position in the applicant's list
  };

  std::vector<std::vector<Held>> held(n_prov);
  std::vector<std::size_t> next(n_app, 0);
  std::vector<std::size_t> seats(n_app, 0);
  std::vector<bool> exhausted(n_app, false);
  std::deque<std::size_t> active;
  for (std::size_t a = 0; a < n_app; ++a) active.push_back(a);

  std::size_t proposals = 0;
  while (!active.empty()) {
    const std::size_t a = active.front();
    active.pop_front();
    const std::size_t quota = market.applicant_quota(a);
    while (seats[a] < quota && !exhausted[a]) {
      const std::size_t rank = next[a];
      std::optional<std::size_t> p = market.choice(a, rank);
      if (!p) {
        exhausted[a] = true;
        break;
      }
      ++next[a];
      ++proposals;
      auto score = market.provider_score(*p, a);
      if (!score) continue;
      auto& pool = held[*p];
      const std::size_t cap = market.provider_quota(*p);
      if (cap == 0) continue;
      if (pool.size() < cap) {
        pool.push_back(Held{*score, a, rank});
        ++seats[a];
        continue;
      }
      auto worst = std::min_element(pool.begin(), pool.end(),
                                    [](const Held& x, const Held& y) { return x.score < y.score; });
      if (worst->score < *score) {
        const std::size_t evicted = worst->applicant;
        *worst = Held{*score, a, rank};
        ++seats[a];
        --seats[evicted];
        active.push_back(evicted);
      }
    }
  }

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> ranked(n_app);
  for (std::size_t p = 0; p < n_prov; ++p)
    for (const auto& h : held[p]) ranked[h.applicant].emplace_back(h.rank, p);

  Matching out;
  out.assignments.resize(n_app);
  for (std::size_t a = 0; a < n_app; ++a) {
    std::sort(ranked[a].begin(), ranked[a].end());
    for (auto [rank, p] : ranked[a]) out.assignments[a].push_back(p);
  }
  if (stats != nullptr) stats->proposals = proposals;
  return out;
}

}  // namespace proxygame::matching
