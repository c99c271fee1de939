#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace proxygame {

/// One stage is one simulated day; the game starts at stage 0.
using Stage = std::uint32_t;

using ClientId = std::uint32_t;
using ProxyId = std::uint32_t;

struct Location {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Location&, const Location&) = default;
};

enum class ClientKind { Benign, CensoringAgent };

struct ClientRecord {
  ClientId id = 0;
  ClientKind kind = ClientKind::Benign;
  Location location;

  /// Current pool of proxies, in the order they were granted. Blocked
  /// proxies leave the pool when the client discards them.
  std::vector<ProxyId> known_proxies;
  /// Stages of use per proxy, in first-use order; keeps entries for
  /// discarded proxies. A handful of entries, so a flat vector.
  std::vector<std::pair<ProxyId, std::uint32_t>> usage_time;
  std::uint32_t total_usage = 0;

  std::uint32_t request_count = 0;
  std::uint32_t blocked_known_count = 0;
  /// Aggregate of (1 - gamma) over all requests: how many known, unblocked,
  /// never-used proxies the client was holding each time it asked for more.
  std::uint32_t idle_unused_requests = 0;

  std::optional<ProxyId> active_proxy;
  Stage joined_at = 0;
  std::optional<Stage> waiting_since;

  [[nodiscard]] bool is_agent() const noexcept { return kind == ClientKind::CensoringAgent; }

  [[nodiscard]] bool knows(ProxyId p) const noexcept {
    return std::find(known_proxies.begin(), known_proxies.end(), p) != known_proxies.end();
  }

  [[nodiscard]] std::uint32_t usage_of(ProxyId p) const noexcept {
    for (const auto& [id, t] : usage_time)
      if (id == p) return t;
    return 0;
  }

  void add_usage(ProxyId p) {
    ++total_usage;
    for (auto& [id, t] : usage_time)
      if (id == p) {
        ++t;
        return;
      }
    usage_time.emplace_back(p, 1);
  }
};

struct ProxyRecord {
  ProxyId id = 0;
  Location location;
  std::uint32_t capacity = 1;
  std::vector<ClientId> knowers;
  /// At most `capacity` entries, each also in `knowers`.
  std::vector<ClientId> connected;
  std::uint64_t total_utilization = 0;
  bool blocked = false;
  Stage created_at = 0;
  std::optional<Stage> blocked_at;

  [[nodiscard]] std::size_t knower_count() const noexcept { return knowers.size(); }
  [[nodiscard]] std::size_t connected_count() const noexcept { return connected.size(); }

  [[nodiscard]] bool is_connected(ClientId c) const noexcept {
    return std::find(connected.begin(), connected.end(), c) != connected.end();
  }

  [[nodiscard]] bool has_free_seat() const noexcept { return connected.size() < capacity; }

  /// Alive and either already serving `c` or holding a free seat.
  [[nodiscard]] bool can_serve(ClientId c) const noexcept {
    return !blocked && (has_free_seat() || is_connected(c));
  }
};

}  // namespace proxygame
