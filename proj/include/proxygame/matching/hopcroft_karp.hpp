#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <queue>
#include <stdexcept>
#include <utility>
#include <vector>

namespace proxygame::matching {

/// Maximum-cardinality matching on a bipartite graph given as adjacency
/// lists from left vertices to right vertices. Returns, per left vertex, the
/// matched right vertex. O(E sqrt(V)).
inline std::vector<std::optional<std::size_t>> hopcroft_karp(const std::vector<std::vector<std::size_t>>& adj,
                                                             std::size_t right_count) {
  constexpr std::size_t kInf = std::numeric_limits<std::size_t>::max();
  const std::size_t n = adj.size();
  std::vector<std::size_t> match_left(n, kInf), match_right(right_count, kInf), dist(n, kInf);

  auto bfs = [&] {
    std::queue<std::size_t> q;
    bool reachable_free = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (match_left[u] == kInf) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      const std::size_t u = q.front();
      q.pop();
      for (std::size_t v : adj[u]) {
        const std::size_t w = match_right[v];
        if (w == kInf) {
          reachable_free = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return reachable_free;
  };

  // Iterative DFS along the BFS layering.
  std::vector<std::size_t> edge_cursor(n, 0);
  auto dfs = [&](std::size_t root) {
    std::vector<std::size_t> stack{root};
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      if (edge_cursor[u] == adj[u].size()) {
        dist[u] = kInf;
        stack.pop_back();
        continue;
      }
      const std::size_t v = adj[u][edge_cursor[u]];
      const std::size_t w = match_right[v];
      if (w == kInf) {
        // Augment along the stack: each u takes the edge its cursor points at.
        for (std::size_t x : stack) {
          const std::size_t y = adj[x][edge_cursor[x]];
          match_left[x] = y;
          match_right[y] = x;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1) {
        stack.push_back(w);
      } else {
        ++edge_cursor[u];
      }
      // When a child subtree fails it pops itself with dist = inf, so the
      // parent's next visit of the same edge falls through to ++cursor.
    }
    return false;
  };

  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t v : adj[u])
      if (v >= right_count) throw std::out_of_range("edge references an unknown right vertex");

  while (bfs()) {
    std::fill(edge_cursor.begin(), edge_cursor.end(), 0);
    for (std::size_t u = 0; u < n; ++u)
      if (match_left[u] == kInf) dfs(u);
  }

  std::vector<std::optional<std::size_t>> out(n);
  for (std::size_t u = 0; u < n; ++u)
    if (match_left[u] != kInf) out[u] = match_left[u];
  return out;
}

/// Id-keyed form: unmatched left ids are absent from the result.
template <class L, class R>
std::map<L, R> max_bipartite_matching(const std::vector<L>& left, const std::vector<R>& right,
                                      const std::vector<std::pair<L, R>>& edges) {
  std::map<L, std::size_t> left_index;
  std::map<R, std::size_t> right_index;
  for (std::size_t i = 0; i < left.size(); ++i) left_index.emplace(left[i], i);
  for (std::size_t i = 0; i < right.size(); ++i) right_index.emplace(right[i], i);
  std::vector<std::vector<std::size_t>> adj(left.size());
  for (const auto& [l, r] : edges) {
    auto li = left_index.find(l);
    auto ri = right_index.find(r);
    if (li == left_index.end() || ri == right_index.end())
      throw std::invalid_argument("edge references an undeclared node");
    adj[li->second].push_back(ri->second);
  }
  const auto matched = hopcroft_karp(adj, right.size());
  std::map<L, R> out;
  for (std::size_t i = 0; i < left.size(); ++i)
    if (matched[i]) out.emplace(left[i], right[*matched[i]]);
  return out;
}

}  // namespace proxygame::matching
