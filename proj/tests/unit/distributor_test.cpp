#include <gtest/gtest.h>

#include "proxygame/distributor.hpp"

using namespace proxygame;

namespace {
struct Fixture {
  SimConfig cfg = default_config();
  WorldState world{1};
  Rng rng{42};

  ProxyId add_proxy(double x = 5000, double y = 0) {
    ProxyRecord p;
    p.id = static_cast<ProxyId>(world.proxies.size());
    p.location = {x, y};
    p.capacity = cfg.capacity;
    world.proxies.push_back(p);
    return p.id;
  }
  ClientId add_client(double x = 0, double y = 0) {
    ClientRecord c;
    c.id = static_cast<ClientId>(world.clients.size());
    c.location = {x, y};
    world.clients.push_back(c);
    return c.id;
  }
  RequestBatch batch(std::vector<ClientId> ids) {
    RequestBatch b;
    b.stage = world.stage;
    b.requesters = ids;
    return b;
  }
};
}  // namespace

TEST(Distributor, SingleRequesterSingleProxy) {
  Fixture f;
  f.add_proxy();
  auto c = f.add_client();
  auto g = assign(f.batch({c}), f.world, f.cfg, f.rng);
  ASSERT_EQ(g.total(), 1u);
  EXPECT_EQ(f.world.proxies[0].knower_count(), 1u);
  EXPECT_TRUE(f.world.clients[c].knows(0));
  EXPECT_EQ(f.world.clients[c].request_count, 1u);
}

TEST(Distributor, CapacityCapsGrants) {
  Fixture f;
  f.add_proxy();
  std::vector<ClientId> ids;
  for (int i = 0; i < 41; ++i) ids.push_back(f.add_client(i * 10.0, 0));
  auto g = assign(f.batch(ids), f.world, f.cfg, f.rng);
  EXPECT_EQ(g.total(), 40u);
  EXPECT_EQ(f.world.proxies[0].knower_count(), 40u);
}

TEST(Distributor, KGrantsBestFirst) {
  Fixture f;
  for (int i = 0; i < 5; ++i) f.add_proxy(2000.0 + 1000 * i, 0);
  // Make proxy 3 the most important.
  f.world.proxies[3].total_utilization = 50;
  auto c = f.add_client();
  auto g = assign(f.batch({c}), f.world, f.cfg, f.rng);
  ASSERT_EQ(g.granted.size(), 1u);
  ASSERT_EQ(g.granted[0].second.size(), 3u);
  EXPECT_EQ(g.granted[0].second[0], 3u);
}

TEST(Distributor, NeverRegrantsKnownProxy) {
  Fixture f;
  f.add_proxy();
  f.add_proxy(6000, 0);
  auto c = f.add_client();
  f.world.clients[c].known_proxies = {0};
  f.world.proxies[0].knowers = {c};
  auto g = assign(f.batch({c}), f.world, f.cfg, f.rng);
  ASSERT_EQ(g.total(), 1u);
  EXPECT_EQ(g.granted[0].second[0], 1u);
  // Idle proxy 0 was held while requesting.
  EXPECT_EQ(f.world.clients[c].idle_unused_requests, 1u);
}

TEST(Distributor, ThresholdExcludesRequester) {
  Fixture f;
  f.add_proxy();
  auto c = f.add_client();
  f.world.clients[c].idle_unused_requests = 1;  // base -90
  auto g = assign(f.batch({c}), f.world, f.cfg, f.rng);
  EXPECT_EQ(g.total(), 0u);
  EXPECT_EQ(f.world.clients[c].request_count, 1u);
}

TEST(Distributor, NothingEligible) {
  Fixture f;
  f.add_proxy();
  f.world.proxies[0].blocked = true;
  auto c = f.add_client();
  EXPECT_EQ(assign(f.batch({c}), f.world, f.cfg, f.rng).total(), 0u);
  EXPECT_EQ(assign_uniform_baseline(f.batch({c}), f.world, f.cfg, f.rng).total(), 0u);
}

TEST(Distributor, FullProxyIsNotEligible) {
  Fixture f;
  f.cfg.capacity = 1;
  f.add_proxy();
  f.world.proxies[0].capacity = 1;
  f.world.proxies[0].connected = {99};
  auto c = f.add_client();
  EXPECT_EQ(assign(f.batch({c}), f.world, f.cfg, f.rng).total(), 0u);
}

TEST(Distributor, WaitIsRecordedOnGrant) {
  Fixture f;
  f.add_proxy();
  auto c = f.add_client();
  f.world.clients[c].waiting_since = 3;
  f.world.stage = 10;
  assign(f.batch({c}), f.world, f.cfg, f.rng);
  EXPECT_FALSE(f.world.clients[c].waiting_since);
  ASSERT_EQ(f.world.fulfilled_waits.size(), 1u);
  EXPECT_EQ(f.world.fulfilled_waits[0], 7u);
}

TEST(Distributor, OutcomeIsStableForBuiltPreferences) {
  Fixture f;
  Rng place(9);
  for (int i = 0; i < 12; ++i) {
    f.add_proxy(uniform(place, 1100, 9000), uniform(place, -9000, 9000));
    f.world.proxies.back().capacity = 3;
    f.world.proxies.back().total_utilization = uniform_index(place, 20);
  }
  std::vector<ClientId> ids;
  for (int i = 0; i < 15; ++i) {
    ids.push_back(f.add_client(uniform(place, -1000, 1000), uniform(place, -1000, 1000)));
    f.world.clients.back().request_count = static_cast<std::uint32_t>(uniform_index(place, 5));
  }
  Rng r1(5), r2(5);
  ProxyMarket market = build_preferences(f.batch(ids), f.world.clients, f.world.proxies, f.cfg, r1);
  auto table = market.to_table();
  auto from_table = matching::deferred_acceptance(table);
  EXPECT_TRUE(matching::is_stable(table, from_table));
  ProxyMarket again = build_preferences(f.batch(ids), f.world.clients, f.world.proxies, f.cfg, r2);
  EXPECT_EQ(matching::deferred_acceptance(again), from_table);
}

TEST(Distributor, BaselineIgnoresThreshold) {
  Fixture f;
  f.add_proxy();
  auto c = f.add_client();
  f.world.clients[c].idle_unused_requests = 1;
  EXPECT_EQ(assign_uniform_baseline(f.batch({c}), f.world, f.cfg, f.rng).total(), 1u);
}

TEST(Distributor, BaselineIsUniform) {
  Fixture f;
  const int n = 10;
  for (int i = 0; i < n; ++i) f.add_proxy(2000.0 + i * 100, 0);
  f.world.proxies[0].total_utilization = 1000;  // importance must not matter
  auto c = f.add_client();
  std::vector<int> hits(n, 0);
  const int trials = 20000;
  for (int t = 0; t < trials; ++t) {
    WorldState w = f.world;
    auto g = assign_uniform_baseline(f.batch({c}), w, f.cfg, f.rng);
    for (ProxyId p : g.granted.at(0).second) ++hits[p];
  }
  const double expected = trials * 3.0 / n;
  double chi2 = 0;
  for (int h : hits) {
    EXPECT_NEAR(h, expected, expected * 0.05);
    chi2 += (h - expected) * (h - expected) / expected;
  }
  EXPECT_LT(chi2, 27.9);  // df=9, p=0.001
}
