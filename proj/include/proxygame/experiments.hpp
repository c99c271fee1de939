#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "proxygame/core/config.hpp"

namespace proxygame {

/// One concrete run inside a preset: an ecosystem plus field assignments.
struct PresetRun {
  std::string label;
  Ecosystem world = Ecosystem::Slow;
  std::vector<std::pair<std::string, nlohmann::json>> mutations;
};

struct ExperimentPreset {
  std::string name;
  std::string description;
  std::vector<PresetRun> runs;
};

struct LabeledConfig {
  std::string label;
  SimConfig config;
};

namespace detail {

using Mutations = std::vector<std::pair<std::string, nlohmann::json>>;

inline Mutations with_rho(double rho, Mutations m) {
  m.emplace_back("adversary.rho_birth", rho);
  m.emplace_back("adversary.rho_stable", rho);
  return m;
}

inline std::string decimal_label(const char* key, double v) {
  std::string s = nlohmann::json(v).dump();
  return std::string(key) + "=" + s;
}

}  // namespace detail

inline const std::vector<ExperimentPreset>& presets() {
  using detail::with_rho;
  static const std::vector<ExperimentPreset> all = [] {
    std::vector<ExperimentPreset> v;
    v.push_back({"static-aggressive",
                 "Static world, aggressive omnipresent censor, rho=0.1",
                 {{"static", Ecosystem::Static, with_rho(0.1, {{"censor.strategy", "aggressive"}})}}});
    v.push_back({"slow-circumscribed-aggressive",
                 "Slow world, aggressive censor with agents in one small subnet, rho=0.1",
                 {{"circumscribed", Ecosystem::Slow,
                   with_rho(0.1, {{"censor.strategy", "aggressive"}, {"adversary.geography", "circumscribed"}})}}});
    v.push_back({"slow-omnipresent-aggressive",
                 "Slow world, aggressive omnipresent censor, rho=0.1",
                 {{"omnipresent", Ecosystem::Slow,
                   with_rho(0.1, {{"censor.strategy", "aggressive"}, {"adversary.geography", "omnipresent"}})}}});
    v.push_back({"slow-conservative",
                 "Slow world, conservative omnipresent censor, rho=0.1",
                 {{"conservative", Ecosystem::Slow, with_rho(0.1, {{"censor.strategy", "conservative"}})}}});
    v.push_back({"slow-optimal",
                 "Slow world, optimal omnipresent censor, rho=0.1",
                 {{"optimal", Ecosystem::Slow, with_rho(0.1, {{"censor.strategy", "optimal"}})}}});

    ExperimentPreset alive{"alive-sweep", "Alive world, optimal censor, rho=0.05, lambda_s in {0.5, 2.5, 5, 7.5}", {}};
    for (double l : {0.5, 2.5, 5.0, 7.5})
      alive.runs.push_back({detail::decimal_label("lambda_s", l), Ecosystem::Alive,
                            with_rho(0.05, {{"censor.strategy", "optimal"}, {"rates.lambda_s", l}})});
    v.push_back(alive);

    ExperimentPreset popular{"popular-sweep",
                             "Popular world, optimal censor, rho=0.05, lambda_s in {0.5, 2.5, 5, 7.5, 10}", {}};
    for (double l : {0.5, 2.5, 5.0, 7.5, 10.0})
      popular.runs.push_back({detail::decimal_label("lambda_s", l), Ecosystem::Popular,
                              with_rho(0.05, {{"censor.strategy", "optimal"}, {"rates.lambda_s", l}})});
    v.push_back(popular);

    v.push_back({"high-rho",
                 "rho=0.2 with an optimal censor on the Alive and Popular worlds",
                 {{"alive", Ecosystem::Alive, with_rho(0.2, {{"censor.strategy", "optimal"}})},
                  {"popular", Ecosystem::Popular, with_rho(0.2, {{"censor.strategy", "optimal"}})}}});

    v.push_back({"invitation",
                 "Alive world, optimal censor: rho 0.02 during birth then 0.1, against 0.1 throughout",
                 {{"invitation", Ecosystem::Alive,
                   {{"censor.strategy", "optimal"}, {"adversary.rho_birth", 0.02}, {"adversary.rho_stable", 0.1}}},
                  {"reference", Ecosystem::Alive, with_rho(0.1, {{"censor.strategy", "optimal"}})}}});

    const detail::Mutations base_cmp = with_rho(
        0.05, {{"censor.strategy", "aggressive"}, {"rates.mu_s", 5.0}, {"rates.lambda_s", 0.5}});
    auto gt = base_cmp;
    gt.emplace_back("distributor.strategy", "game_theoretic");
    auto uni = base_cmp;
    uni.emplace_back("distributor.strategy", "uniform_random");
    v.push_back({"baseline-compare",
                 "Slow world, aggressive censor, rho=0.05, mu_s=5, lambda_s=0.5: game-theoretic vs uniform random",
                 {{"game_theoretic", Ecosystem::Slow, gt}, {"uniform_random", Ecosystem::Slow, uni}}});
    return v;
  }();
  return all;
}

inline const ExperimentPreset* find_preset(std::string_view name) {
  for (const auto& p : presets())
    if (p.name == name) return &p;
  return nullptr;
}

inline std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& p : presets()) out.push_back(p.name);
  return out;
}

/// Concrete validated configs for every run of a preset. `overrides` are
/// applied last, on top of the preset's own assignments.
inline std::vector<LabeledConfig> expand(const ExperimentPreset& preset,
                                         const std::vector<std::pair<std::string, nlohmann::json>>& overrides = {}) {
  std::vector<LabeledConfig> out;
  for (const auto& run : preset.runs) {
    SimConfig cfg = ecosystem(run.world);
    for (const auto& [path, value] : run.mutations) set_field(cfg, path, value);
    for (const auto& [path, value] : overrides) set_field(cfg, path, value);
    validate(cfg);
    out.push_back({run.label, cfg});
  }
  return out;
}

}  // namespace proxygame
