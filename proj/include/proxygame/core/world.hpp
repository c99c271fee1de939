#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "proxygame/core/config.hpp"
#include "proxygame/core/random.hpp"
#include "proxygame/core/types.hpp"

namespace proxygame {

/// What the central censor knows and controls. The censor reads its own
/// agents' ClientRecords directly: it knows their histories exactly, so a
/// separate shadow copy of T, R, delta and idle would only duplicate them.
struct CensorState {
  struct Discovery {
    Stage stage = 0;
    ClientId agent = 0;
  };

  /// The proxies known to the censor, with first discovery.
  std::map<ProxyId, Discovery> known;
  std::vector<ClientId> agents;
  /// Learned during the current stage, in report order.
  std::vector<ProxyId> newly_learned;
  /// Connection plan for the next stage.
  std::map<ClientId, ProxyId> directives;
  /// Every proxy this censor has blocked, in blocking order.
  std::vector<ProxyId> blocked;
  /// Blocking score from the optimal censor's last look at each proxy.
  std::map<ProxyId, double> last_delta_phi;
};

/// Ids are dense: clients[id].id == id, proxies[id].id == id.
struct WorldState {
  Stage stage = 0;
  std::vector<ClientRecord> clients;
  std::vector<ProxyRecord> proxies;
  CensorState censor;

  std::uint64_t clients_spawned = 0;
  std::uint64_t proxies_spawned = 0;

  RngStreams rng;

  /// Wait lengths of benign clients whose waiting ended with a grant this
  /// stage; reset at the start of every stage.
  std::vector<std::uint32_t> fulfilled_waits;

  explicit WorldState(std::uint64_t seed) : rng(seed) {}

  [[nodiscard]] const ProxyRecord& proxy(ProxyId id) const { return proxies[id]; }
  [[nodiscard]] ProxyRecord& proxy(ProxyId id) { return proxies[id]; }
  [[nodiscard]] const ClientRecord& client(ClientId id) const { return clients[id]; }
  [[nodiscard]] ClientRecord& client(ClientId id) { return clients[id]; }
};

}  // namespace proxygame
