#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "proxygame/proxygame.hpp"

namespace fs = std::filesystem;
using namespace proxygame;

namespace {

constexpr std::size_t kWindow = 500;

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string default_root() {
  const char* env = std::getenv("PROXYGAME_OUT");
  return env != nullptr && *env != '\0' ? env : "runs";
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Failure("cannot write " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure("cannot create output directory " + dir.string());
}

std::string csv_text(const std::vector<StageMetrics>& s) {
  std::ostringstream os;
  write_csv(os, s);
  return os.str();
}

std::string summary_text(const SimConfig& cfg, const std::vector<StageMetrics>& s) {
  std::ostringstream os;
  os << "seed: " << cfg.seed << '\n';
  write_summary(os, summarize(s, kWindow, cfg.birth_interval));
  return os.str();
}

/// Writes metrics.csv, summary.txt and the exact config (the run's manifest).
void write_run(const fs::path& dir, const SimConfig& cfg, const std::vector<StageMetrics>& s) {
  make_dir(dir);
  write_file(dir / "metrics.csv", csv_text(s));
  write_file(dir / "summary.txt", summary_text(cfg, s));
  write_file(dir / "config.json", dump_config(cfg));
}

/// Column-wise mean over equally long series.
std::string mean_csv(const std::vector<std::vector<StageMetrics>>& runs) {
  std::ostringstream os;
  os << kCsvHeader << '\n';
  if (runs.empty()) return os.str();
  const std::size_t n = runs.front().size();
  const double k = static_cast<double>(runs.size());
  char buf[512];
  for (std::size_t t = 0; t < n; ++t) {
    double v[8] = {};
    for (const auto& r : runs) {
      const auto& m = r[t];
      v[0] += m.connected_users;
      v[1] += m.connected_ratio;
      v[2] += m.total_capacity;
      v[3] += m.mean_wait_time;
      v[4] += m.blocked_proxies;
      v[5] += m.alive_proxies;
      v[6] += m.agent_count;
      v[7] += m.benign_count;
    }
    std::snprintf(buf, sizeof buf, "%zu,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f", t, v[0] / k, v[1] / k, v[2] / k,
                  v[3] / k, v[4] / k, v[5] / k, v[6] / k, v[7] / k);
    os << buf << '\n';
  }
  return os.str();
}

/// Runs `cfg` for `seeds` consecutive seeds. With one seed the files land in
/// `dir`; otherwise in dir/seed-N plus a mean series.
std::vector<StageMetrics> run_seeds(const SimConfig& cfg, std::size_t seeds, std::size_t workers,
                                    const fs::path& dir) {
  std::vector<SimConfig> cfgs;
  for (std::size_t i = 0; i < seeds; ++i) {
    SimConfig c = cfg;
    c.seed = cfg.seed + i;
    cfgs.push_back(c);
  }
  std::vector<std::vector<StageMetrics>> out(cfgs.size());
  parallel_for(cfgs.size(), workers, [&](std::size_t i) { out[i] = run(cfgs[i]); });
  if (seeds == 1) {
    write_run(dir, cfgs[0], out[0]);
  } else {
    make_dir(dir);
    for (std::size_t i = 0; i < seeds; ++i) write_run(dir / ("seed-" + std::to_string(cfgs[i].seed)), cfgs[i], out[i]);
    write_file(dir / "mean.csv", mean_csv(out));
  }
  return out[0];
}

std::vector<std::pair<std::string, nlohmann::json>> parse_overrides(const std::vector<std::string>& sets) {
  std::vector<std::pair<std::string, nlohmann::json>> out;
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects path=value, got '" + s + "'");
    const std::string text = s.substr(eq + 1);
    nlohmann::json v = nlohmann::json::parse(text, nullptr, false);
    if (v.is_discarded()) v = text;
    out.emplace_back(s.substr(0, eq), v);
  }
  return out;
}

struct CompareRow {
  std::string name;
  std::vector<StageMetrics> series;
};

int cmd_compare(const std::vector<std::string>& dirs, const std::string& out_dir) {
  if (dirs.size() < 2) throw Failure("compare needs at least two run directories");
  std::vector<CompareRow> rows;
  for (const auto& d : dirs) {
    std::ifstream in(fs::path(d) / "metrics.csv");
    if (!in) throw Failure(d + ": no metrics.csv");
    auto s = read_csv(in);
    if (!s) throw Failure(d + ": metrics.csv is malformed");
    rows.push_back({fs::path(d).lexically_normal().string(), std::move(*s)});
  }
  for (const auto& r : rows)
    if (r.series.size() != rows.front().series.size())
      throw Failure("incompatible runs: " + r.name + " has " + std::to_string(r.series.size()) + " stages, " +
                    rows.front().name + " has " + std::to_string(rows.front().series.size()));

  std::printf("%-40s %14s %14s %14s %16s %14s\n", "run", "final_ratio", "window_ratio", "final_users",
              "window_users", "ratio_slope");
  for (const auto& r : rows) {
    const Summary s = summarize(r.series, kWindow);
    std::printf("%-40s %14.6f %14.6f %14.0f %16.3f %14.3e\n", r.name.c_str(),
                s[Metric::ConnectedRatio].final_value, s[Metric::ConnectedRatio].window_mean,
                s[Metric::ConnectedUsers].final_value, s[Metric::ConnectedUsers].window_mean,
                s[Metric::ConnectedRatio].stable_slope);
  }

  std::ostringstream os;
  os << "stage";
  for (const auto& r : rows) os << ',' << r.name << ":connected_users," << r.name << ":connected_ratio";
  os << '\n';
  char buf[64];
  for (std::size_t t = 0; t < rows.front().series.size(); ++t) {
    os << t;
    for (const auto& r : rows) {
      std::snprintf(buf, sizeof buf, ",%llu,%.6f", static_cast<unsigned long long>(r.series[t].connected_users),
                    r.series[t].connected_ratio);
      os << buf;
    }
    os << '\n';
  }
  make_dir(out_dir);
  write_file(fs::path(out_dir) / "compare.csv", os.str());
  std::printf("merged series: %s\n", (fs::path(out_dir) / "compare.csv").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Proxy distribution game simulator"};
  app.require_subcommand(1);
  std::size_t workers = 1;
  std::size_t seeds = 1;
  app.add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  app.add_option("--seeds", seeds, "Consecutive seeds per configuration")->check(CLI::PositiveNumber);

  std::string config_path, out_dir;
  std::optional<std::uint64_t> seed;
  auto* run_cmd = app.add_subcommand("run", "Run one configuration file");
  run_cmd->add_option("--config", config_path, "JSON configuration")->required();
  run_cmd->add_option("--seed", seed, "Seed (overrides the file)");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  run_cmd->add_option("--seeds", seeds, "Consecutive seeds")->check(CLI::PositiveNumber);

  std::string preset_name;
  std::vector<std::string> sets;
  auto* preset_cmd = app.add_subcommand("preset", "Run a named experiment");
  preset_cmd->add_option("name", preset_name, "Preset name")->required();
  preset_cmd->add_option("--set", sets, "Override path=value")->take_all();
  preset_cmd->add_option("--seed", seed, "Seed");
  preset_cmd->add_option("--out", out_dir, "Output directory");
  preset_cmd->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  preset_cmd->add_option("--seeds", seeds, "Consecutive seeds")->check(CLI::PositiveNumber);

  std::vector<std::string> dirs;
  auto* cmp_cmd = app.add_subcommand("compare", "Compare finished runs");
  cmp_cmd->add_option("dirs", dirs, "Run directories")->required();
  cmp_cmd->add_option("--out", out_dir, "Where compare.csv goes");

  app.add_subcommand("presets", "List preset names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      SimConfig cfg = load_config(config_path);
      if (seed) cfg.seed = *seed;
      validate(cfg);
      if (out_dir.empty()) out_dir = (fs::path(default_root()) / ("run-seed" + std::to_string(cfg.seed))).string();
      auto first = run_seeds(cfg, seeds, workers, out_dir);
      std::cout << summary_text(cfg, first);
      return 0;
    }
    if (*preset_cmd) {
      const ExperimentPreset* p = find_preset(preset_name);
      if (p == nullptr) {
        std::cerr << "unknown preset '" << preset_name << "'; valid names:\n";
        for (const auto& n : preset_names()) std::cerr << "  " << n << '\n';
        return 2;
      }
      auto overrides = parse_overrides(sets);
      if (seed) overrides.emplace_back("seed", *seed);
      const auto runs = expand(*p, overrides);
      if (out_dir.empty()) out_dir = (fs::path(default_root()) / p->name).string();
      make_dir(out_dir);
      std::vector<std::vector<StageMetrics>> results(runs.size());
      // Runs of one preset go in parallel; seeds inside each run follow.
      parallel_for(runs.size(), workers, [&](std::size_t i) {
        results[i] = run_seeds(runs[i].config, seeds, 1, fs::path(out_dir) / runs[i].label);
      });
      std::ostringstream combined;
      combined << "preset: " << p->name << '\n' << "description: " << p->description << '\n';
      for (std::size_t i = 0; i < runs.size(); ++i) {
        combined << "\n[" << runs[i].label << "]\n" << summary_text(runs[i].config, results[i]);
      }
      write_file(fs::path(out_dir) / "summary.txt", combined.str());
      std::cout << combined.str();
      return 0;
    }
    if (*cmp_cmd) return cmd_compare(dirs, out_dir.empty() ? default_root() : out_dir);
    for (const auto& p : presets()) std::cout << p.name << "  " << p.description << '\n';
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
