#include <gtest/gtest.h>

#include <cstdio>
#include <fstream>

#include "proxygame/core/config.hpp"

using namespace proxygame;

TEST(Config, DefaultsValidate) {
  SimConfig c = default_config();
  EXPECT_NO_THROW(validate(c));
  EXPECT_EQ(c.k, 3u);
  EXPECT_EQ(c.capacity, 40u);
  EXPECT_DOUBLE_EQ(c.alphas[2], 100.0);
  EXPECT_DOUBLE_EQ(c.nu, 500.0);
  EXPECT_EQ(c.total_stages, 2000u);
}

TEST(Config, EcosystemRates) {
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Static).lambda_s, 0.0);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Static).mu_s, 0.1);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Slow).lambda_s, 0.2);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Alive).mu_s, 10.0);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Popular).mu_s, 20.0);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Alive, 7.5).lambda_s, 7.5);
  EXPECT_DOUBLE_EQ(ecosystem(Ecosystem::Popular, 10.0).lambda_s, 10.0);
  for (auto e : {Ecosystem::Static, Ecosystem::Slow, Ecosystem::Alive, Ecosystem::Popular}) {
    EXPECT_DOUBLE_EQ(ecosystem(e).mu_b, 25.0);
    EXPECT_DOUBLE_EQ(ecosystem(e).lambda_b, 5.0);
  }
}

TEST(Config, EcosystemOverrideOutOfRange) {
  EXPECT_THROW(ecosystem(Ecosystem::Alive, 8.0), ConfigError);
  EXPECT_THROW(ecosystem(Ecosystem::Alive, 0.4), ConfigError);
  EXPECT_THROW(ecosystem(Ecosystem::Popular, 10.5), ConfigError);
  EXPECT_THROW(ecosystem(Ecosystem::Slow, 1.0), ConfigError);
  EXPECT_THROW(ecosystem(Ecosystem::Static, 1.0), ConfigError);
}

TEST(Config, ValidationNamesThePath) {
  SimConfig c = default_config();
  c.eta = 10.0;
  try {
    validate(c);
    FAIL() << "expected rejection";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("utility.eta"), std::string::npos);
  }
  c = default_config();
  c.rho_stable = 1.5;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_config();
  c.circumscribed_region = 2000;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_config();
  c.mu_s = -1;
  EXPECT_THROW(validate(c), ConfigError);
  c = default_config();
  c.k = 0;
  EXPECT_THROW(validate(c), ConfigError);
}

TEST(Config, DottedPaths) {
  SimConfig c = default_config();
  set_field(c, "rates.lambda_s", 2.5);
  EXPECT_DOUBLE_EQ(c.lambda_s, 2.5);
  set_field_from_text(c, "censor.strategy", "aggressive");
  EXPECT_EQ(c.censor.kind, CensorKind::Aggressive);
  set_field_from_text(c, "distributor.k", "5");
  EXPECT_EQ(c.k, 5u);
  set_field_from_text(c, "adversary.geography", "circumscribed");
  EXPECT_EQ(c.geography, CensorGeography::Circumscribed);
  EXPECT_THROW(set_field(c, "rates.nope", 1.0), ConfigError);
  EXPECT_THROW(set_field_from_text(c, "censor.strategy", "sneaky"), ConfigError);
  EXPECT_THROW(set_field_from_text(c, "distributor.k", "-1"), ConfigError);
  EXPECT_THROW(set_field_from_text(c, "distributor.k", "1.5"), ConfigError);
  EXPECT_TRUE(is_numeric_field("rates.lambda_s"));
  EXPECT_FALSE(is_numeric_field("censor.strategy"));
  EXPECT_FALSE(is_numeric_field("unknown"));
}

TEST(Config, JsonRoundTrip) {
  SimConfig c = ecosystem(Ecosystem::Alive, 2.5);
  c.seed = 99;
  c.censor.kind = CensorKind::Conservative;
  c.distributor = DistributorKind::UniformRandomBaseline;
  SimConfig back = from_json(to_json(c));
  EXPECT_EQ(dump_config(back), dump_config(c));
  for (const auto& path : field_paths()) EXPECT_EQ(get_field(back, path), get_field(c, path)) << path;
}

TEST(Config, UnknownKeyInFileIsAnError) {
  EXPECT_THROW(from_json(nlohmann::json::parse(R"({"rates": {"mu_x": 1}})")), ConfigError);
  EXPECT_THROW(from_json(nlohmann::json::parse("[1]")), ConfigError);
  SimConfig c = from_json(nlohmann::json::parse(R"({"rates": {"mu_s": 7}})"));
  EXPECT_DOUBLE_EQ(c.mu_s, 7.0);
  EXPECT_DOUBLE_EQ(c.mu_b, 25.0);
}

TEST(Config, LoadFromFile) {
  const std::string path = ::testing::TempDir() + "proxygame_cfg.json";
  {
    std::ofstream out(path);
    out << R"({"seed": 5, "censor": {"strategy": "aggressive"}})";
  }
  SimConfig c = load_config(path);
  EXPECT_EQ(c.seed, 5u);
  EXPECT_EQ(c.censor.kind, CensorKind::Aggressive);
  std::remove(path.c_str());
  EXPECT_THROW(load_config(path), ConfigError);
}
