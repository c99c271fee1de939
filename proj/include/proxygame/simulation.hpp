#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "proxygame/censor.hpp"
#include "proxygame/clients.hpp"
#include "proxygame/core/config.hpp"
#include "proxygame/core/geometry.hpp"
#include "proxygame/core/world.hpp"
#include "proxygame/distributor.hpp"
#include "proxygame/metrics.hpp"
#include "proxygame/utility.hpp"

namespace proxygame {

/// Raised by the invariant layer. Carries the stage and a description.
class InvariantViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Fractional arrival credits. Counts are derived from the running sums so
/// repeated small rates never drift.
struct ArrivalCredits {
  double clients = 0.0;
  double proxies = 0.0;
};

inline std::uint64_t credited(double cumulative) {
  return static_cast<std::uint64_t>(std::floor(cumulative + 1e-9));
}

namespace detail {

inline void spawn(WorldState& world, ArrivalCredits& credits, const SimConfig& cfg, std::vector<ClientId>& joiners) {
  const bool birth = world.stage < cfg.birth_interval;
  credits.clients += birth ? cfg.mu_b : cfg.mu_s;
  credits.proxies += birth ? cfg.lambda_b : cfg.lambda_s;
  const double rho = birth ? cfg.rho_birth : cfg.rho_stable;
  Rng& rng = world.rng.population;

  for (std::uint64_t n = credited(credits.proxies); world.proxies_spawned < n; ++world.proxies_spawned) {
    ProxyRecord p;
    p.id = static_cast<ProxyId>(world.proxies.size());
    p.location = sample_location(rng, Role::Proxy, cfg.geography, cfg);
    p.capacity = cfg.capacity;
    p.created_at = world.stage;
    world.proxies.push_back(std::move(p));
  }
  for (std::uint64_t n = credited(credits.clients); world.clients_spawned < n; ++world.clients_spawned) {
    ClientRecord c;
    c.id = static_cast<ClientId>(world.clients.size());
    c.kind = bernoulli(rng, rho) ? ClientKind::CensoringAgent : ClientKind::Benign;
    c.location = sample_location(rng, c.is_agent() ? Role::CensoringAgent : Role::BenignClient, cfg.geography, cfg);
    c.joined_at = world.stage;
    c.waiting_since = world.stage;
    if (c.is_agent()) world.censor.agents.push_back(c.id);
    joiners.push_back(c.id);
    world.clients.push_back(std::move(c));
  }
}

/// Moves the client onto `use` (or off everything) and accrues usage.
inline void settle(ClientRecord& c, const std::optional<ProxyId>& use, std::vector<ProxyRecord>& proxies) {
  if (c.active_proxy && c.active_proxy != use) release_connection(c, proxies);
  if (!use || !use_proxy(c, proxies[*use], 0)) c.active_proxy.reset();
}

}  // namespace detail

/// Checks the structural invariants of a world. Throws InvariantViolation.
inline void check_invariants(const WorldState& world, const ArrivalCredits& credits) {
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "stage " << world.stage << ": " << what;
    throw InvariantViolation(os.str());
  };

  if (world.clients.size() != credited(credits.clients)) fail("client count differs from arrival credits");
  if (world.proxies.size() != credited(credits.proxies)) fail("proxy count differs from arrival credits");

  std::vector<int> seen(world.clients.size(), 0);
  std::size_t total_connected = 0;
  for (std::size_t i = 0; i < world.proxies.size(); ++i) {
    const ProxyRecord& p = world.proxies[i];
    if (p.id != i) fail("proxy id mismatch");
    if (p.connected.size() > p.capacity) fail("proxy " + std::to_string(i) + " over capacity");
    if (p.blocked && !p.connected.empty()) fail("blocked proxy " + std::to_string(i) + " still serving");
    if (p.blocked != p.blocked_at.has_value()) fail("blocked flag and stage disagree");
    for (ClientId c : p.connected) {
      if (c >= world.clients.size()) fail("connected id out of range");
      if (++seen[c] > 1) fail("client " + std::to_string(c) + " in two connected sets");
      if (std::find(p.knowers.begin(), p.knowers.end(), c) == p.knowers.end())
        fail("client " + std::to_string(c) + " connected to a proxy it was never given");
      if (world.clients[c].active_proxy != p.id) fail("connected client's active proxy disagrees");
    }
    for (ClientId c : p.knowers)
      if (c >= world.clients.size()) fail("knower id out of range");
    total_connected += p.connected.size();
  }
  if (total_connected > world.clients.size()) fail("more connections than clients");

  std::size_t agents = 0;
  for (std::size_t i = 0; i < world.clients.size(); ++i) {
    const ClientRecord& c = world.clients[i];
    if (c.id != i) fail("client id mismatch");
    if (c.is_agent()) ++agents;
    std::uint64_t usage = 0;
    for (const auto& [p, t] : c.usage_time) usage += t;
    if (usage != c.total_usage) fail("client " + std::to_string(i) + " usage does not add up");
    for (ProxyId p : c.known_proxies) {
      if (p >= world.proxies.size()) fail("known proxy out of range");
      const auto& kn = world.proxies[p].knowers;
      if (std::find(kn.begin(), kn.end(), c.id) == kn.end()) fail("pool entry missing from proxy knowers");
    }
    if (c.active_proxy && !c.knows(*c.active_proxy)) fail("client " + std::to_string(i) + " active proxy not in pool");
  }
  if (agents != world.censor.agents.size()) fail("censor agent roster differs from agent count");
  for (ClientId a : world.censor.agents)
    if (a >= world.clients.size() || !world.clients[a].is_agent()) fail("censor roster names a non-agent");

  for (ProxyId p : world.censor.blocked)
    if (p >= world.proxies.size() || !world.proxies[p].blocked) fail("censor block record on an alive proxy");
  std::size_t blocked = 0;
  for (const auto& p : world.proxies) blocked += p.blocked;
  if (blocked != world.censor.blocked.size()) fail("blocked proxies not all recorded");
  for (const auto& [p, d] : world.censor.known)
    if (p >= world.proxies.size()) fail("censor knows an unknown proxy");
}

/// A run in progress. `step` advances exactly one stage.
class Simulation {
 public:
  explicit Simulation(SimConfig cfg, bool check = true) : cfg_(std::move(cfg)), world_(cfg_.seed), check_(check) {
    validate(cfg_);
  }

  [[nodiscard]] const WorldState& world() const noexcept { return world_; }
  [[nodiscard]] const SimConfig& config() const noexcept { return cfg_; }
  [[nodiscard]] const ArrivalCredits& credits() const noexcept { return credits_; }
  [[nodiscard]] bool done() const noexcept { return world_.stage >= cfg_.total_stages; }

  StageMetrics step() {
    if (done()) throw std::logic_error("step past total_stages");
    const Stage stage = world_.stage;
    const UtilityParams params = UtilityParams::from(cfg_);
    world_.fulfilled_waits.clear();

    // (1) arrivals
    RequestBatch batch;
    batch.stage = stage;
    detail::spawn(world_, credits_, cfg_, batch.new_joiners);

    // (2) clients act, ascending ids
    for (auto& c : world_.clients) {
      ClientAction act;
      if (c.is_agent()) {
        AgentDirective dir;
        if (auto it = world_.censor.directives.find(c.id); it != world_.censor.directives.end()) dir = it->second;
        act = agent_step(c, dir, world_.proxies, stage, params);
      } else {
        act = benign_step(c, world_.proxies, stage);
      }
      detail::settle(c, act.use, world_.proxies);
      if (act.request) batch.requesters.push_back(c.id);
    }

    // (3) distributor
    Grants grants = cfg_.distributor == DistributorKind::GameTheoretic
                        ? assign(batch, world_, cfg_, world_.rng.tie_break)
                        : assign_uniform_baseline(batch, world_, cfg_, world_.rng.baseline);

    // (4) censor
    ingest_reports(world_.censor, grants, world_);
    const auto blocks = decide_blocks(world_.censor, world_, stage, cfg_, world_.rng.censor_coins);
    apply_blocks(world_, blocks);
    world_.censor.directives = assign_agents(world_.censor, world_, cfg_, world_.rng.agent_assignment);

    // (5) measure
    StageMetrics m = sample(world_);
    if (check_) check_invariants(world_, credits_);

    // (6)
    ++world_.stage;
    return m;
  }

 private:
  SimConfig cfg_;
  WorldState world_;
  ArrivalCredits credits_;
  bool check_;
};

struct RunOptions {
  /// The invariant layer is on unless explicitly disabled for profiling.
  bool check_invariants = true;
};

inline std::vector<StageMetrics> run(const SimConfig& cfg, RunOptions opts = {}) {
  Simulation sim(cfg, opts.check_invariants);
  std::vector<StageMetrics> series;
  series.reserve(cfg.total_stages);
  while (!sim.done()) series.push_back(sim.step());
  return series;
}

/// Agent spawn probability switches from rho_birth to rho_stable at the end
/// of the birth interval. `run` already does this; the wrapper names the
/// scenario.
inline std::vector<StageMetrics> run_invitation_scenario(const SimConfig& cfg, RunOptions opts = {}) {
  return run(cfg, opts);
}

/// Runs `jobs` on up to `workers` threads; results land by index.
template <class Job>
void parallel_for(std::size_t count, std::size_t workers, Job job) {
  workers = std::max<std::size_t>(1, std::min(workers, count));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

/// One independent run per value of the numeric field `axis`, all with the
/// base seed.
inline std::map<double, std::vector<StageMetrics>> run_sweep(const SimConfig& base, const std::string& axis,
                                                             const std::vector<double>& values,
                                                             std::size_t workers = 1, RunOptions opts = {}) {
  if (!is_numeric_field(axis)) throw ConfigError(axis + ": not a numeric configuration field");
  std::vector<SimConfig> cfgs;
  for (double v : values) {
    SimConfig c = base;
    set_field(c, axis, v);
    validate(c);
    cfgs.push_back(c);
  }
  std::vector<std::vector<StageMetrics>> out(cfgs.size());
  parallel_for(cfgs.size(), workers, [&](std::size_t i) { out[i] = run(cfgs[i], opts); });
  std::map<double, std::vector<StageMetrics>> result;
  for (std::size_t i = 0; i < values.size(); ++i) result.emplace(values[i], std::move(out[i]));
  return result;
}

}  // namespace proxygame
