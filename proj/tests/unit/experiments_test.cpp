#include <gtest/gtest.h>

#include "proxygame/experiments.hpp"

using namespace proxygame;

TEST(Experiments, AllPresetsExpandToValidConfigs) {
  const std::vector<std::string> expected = {"static-aggressive", "slow-circumscribed-aggressive",
                                             "slow-omnipresent-aggressive", "slow-conservative", "slow-optimal",
                                             "alive-sweep", "popular-sweep", "high-rho", "invitation",
                                             "baseline-compare"};
  EXPECT_EQ(preset_names(), expected);
  for (const auto& p : presets()) {
    auto runs = expand(p);
    EXPECT_FALSE(runs.empty()) << p.name;
    for (auto& r : runs) {
      EXPECT_NO_THROW(validate(r.config));
      // Presets are sugar: every run round-trips through a plain config file.
      EXPECT_EQ(dump_config(from_json(to_json(r.config))), dump_config(r.config));
    }
  }
}

TEST(Experiments, SlowOptimal) {
  auto runs = expand(*find_preset("slow-optimal"));
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_EQ(runs[0].config.censor.kind, CensorKind::Optimal);
  EXPECT_EQ(runs[0].config.geography, CensorGeography::Omnipresent);
  EXPECT_DOUBLE_EQ(runs[0].config.lambda_s, 0.2);
}

TEST(Experiments, AliveSweepGrid) {
  auto runs = expand(*find_preset("alive-sweep"));
  ASSERT_EQ(runs.size(), 4u);
  const double grid[] = {0.5, 2.5, 5.0, 7.5};
  for (std::size_t i = 0; i < 4; ++i) EXPECT_DOUBLE_EQ(runs[i].config.lambda_s, grid[i]);
}

TEST(Experiments, HighRhoAndInvitation) {
  auto hr = expand(*find_preset("high-rho"));
  ASSERT_EQ(hr.size(), 2u);
  for (auto& r : hr) EXPECT_DOUBLE_EQ(r.config.rho_stable, 0.2);
  auto inv = expand(*find_preset("invitation"));
  EXPECT_DOUBLE_EQ(inv[0].config.rho_birth, 0.02);
  EXPECT_DOUBLE_EQ(inv[0].config.rho_stable, 0.1);
}

TEST(Experiments, BaselineCompare) {
  auto runs = expand(*find_preset("baseline-compare"));
  ASSERT_EQ(runs.size(), 2u);
  EXPECT_EQ(runs[0].config.distributor, DistributorKind::GameTheoretic);
  EXPECT_EQ(runs[1].config.distributor, DistributorKind::UniformRandomBaseline);
  for (auto& r : runs) {
    EXPECT_DOUBLE_EQ(r.config.rho_stable, 0.05);
    EXPECT_DOUBLE_EQ(r.config.mu_s, 5.0);
    EXPECT_DOUBLE_EQ(r.config.lambda_s, 0.5);
    EXPECT_EQ(r.config.censor.kind, CensorKind::Aggressive);
  }
}

TEST(Experiments, OverridesApplyLastAndValidate) {
  auto runs = expand(*find_preset("slow-optimal"), {{"schedule.total_stages", 10}});
  EXPECT_EQ(runs[0].config.total_stages, 10u);
  EXPECT_THROW(expand(*find_preset("slow-optimal"), {{"utility.eta", 50}}), ConfigError);
  EXPECT_THROW(expand(*find_preset("slow-optimal"), {{"nope", 1}}), ConfigError);
  EXPECT_EQ(find_preset("missing"), nullptr);
}
