#include <gtest/gtest.h>

#include "proxygame/utility.hpp"

using namespace proxygame;

namespace {
UtilityParams params() { return UtilityParams::from(default_config()); }

ProxyRecord proxy_with(std::size_t knowers, std::size_t connected, std::uint64_t tau) {
  ProxyRecord p;
  p.capacity = 40;
  for (std::size_t i = 0; i < knowers; ++i) p.knowers.push_back(static_cast<ClientId>(i));
  for (std::size_t i = 0; i < connected; ++i) p.connected.push_back(static_cast<ClientId>(i));
  p.total_utilization = tau;
  return p;
}
}  // namespace

TEST(Utility, ClientUtilityExamples) {
  auto p = proxy_with(2, 1, 0);
  EXPECT_DOUBLE_EQ(client_utility(p, 1.0, params()), 7.0);
  EXPECT_DOUBLE_EQ(client_utility(p, 0.5, params()), 49.0);
  EXPECT_DOUBLE_EQ(client_utility(proxy_with(0, 0, 0), 0.3, params()), 0.0);
}

TEST(Utility, ProxyUtilityBaseExamples) {
  ClientRecord c;
  EXPECT_DOUBLE_EQ(proxy_utility_base(c, params()), 10.0);
  c.usage_time = {{0, 150}};
  c.total_usage = 150;
  c.request_count = 2;
  c.blocked_known_count = 1;
  EXPECT_DOUBLE_EQ(proxy_utility_base(c, params()), 103.0);
  ClientRecord idle;
  idle.idle_unused_requests = 1;
  EXPECT_DOUBLE_EQ(proxy_utility_base(idle, params()), -90.0);
}

TEST(Utility, UsageCap) {
  ClientRecord a, b;
  a.total_usage = 100;
  b.total_usage = 5000;
  EXPECT_DOUBLE_EQ(proxy_utility_base(a, params()), proxy_utility_base(b, params()));
}

TEST(Utility, SignedPowerExamples) {
  ClientRecord c;
  EXPECT_DOUBLE_EQ(proxy_utility(c, 1.0, params()), 10.0);
  EXPECT_DOUBLE_EQ(proxy_utility(c, 0.5, params()), 100.0);
  ClientRecord idle;
  idle.idle_unused_requests = 1;
  EXPECT_DOUBLE_EQ(proxy_utility(idle, 0.5, params()), -8100.0);
  EXPECT_DOUBLE_EQ(signed_power(0.0, 3.0), 0.0);
}

TEST(Utility, KeysOrderLikeValues) {
  const double bases[] = {-90, -3, -0.5, 0, 0.5, 1, 2, 7, 1e6};
  const double dists[] = {1.0, 0.5, 0.3};
  for (double b1 : bases)
    for (double b2 : bases)
      for (double d : dists) {
        const double v1 = signed_power(b1, 1 / d), v2 = signed_power(b2, 1 / d);
        const auto k1 = UtilityKey::of(b1, 1 / d), k2 = UtilityKey::of(b2, 1 / d);
        EXPECT_EQ(v1 < v2, k1 < k2) << b1 << " " << b2 << " " << d;
        EXPECT_EQ(v1 == v2, k1 == k2) << b1 << " " << b2 << " " << d;
      }
}

TEST(Utility, KeysDoNotOverflow) {
  // 50^1000 and 60^1000 are both infinite as doubles but still ordered.
  EXPECT_TRUE(std::isinf(std::pow(50.0, 1000.0)));
  EXPECT_LT(UtilityKey::of(50, 1000), UtilityKey::of(60, 1000));
  EXPECT_LT(UtilityKey::of(-60, 1000), UtilityKey::of(-50, 1000));
}

TEST(Utility, MonotoneInImportanceAndDistance) {
  auto p = params();
  EXPECT_LT(client_utility(proxy_with(2, 1, 0), 0.5, p), client_utility(proxy_with(3, 1, 0), 0.5, p));
  EXPECT_LT(client_utility(proxy_with(2, 1, 0), 0.5, p), client_utility(proxy_with(2, 2, 0), 0.5, p));
  EXPECT_LT(client_utility(proxy_with(2, 1, 0), 0.5, p), client_utility(proxy_with(2, 1, 1), 0.5, p));
  EXPECT_GE(client_utility(proxy_with(2, 1, 0), 0.4, p), client_utility(proxy_with(2, 1, 0), 0.8, p));
}

TEST(Utility, AgentPayoffExamples) {
  auto p = params();
  EXPECT_DOUBLE_EQ(agent_payoff(5, p), 5);
  EXPECT_DOUBLE_EQ(agent_payoff(-3, p), -500);
  EXPECT_DOUBLE_EQ(agent_payoff(0, p), 0);
  ClientRecord agent;
  agent.kind = ClientKind::CensoringAgent;
  agent.blocked_known_count = 3;
  EXPECT_DOUBLE_EQ(censor_agent_payoff(agent, p), -500);
  EXPECT_FALSE(passes_threshold(agent, p));
}
