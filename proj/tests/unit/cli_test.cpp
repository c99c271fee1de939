#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path root = [] {
    fs::path p = fs::temp_directory_path() / ("proxygame_cli_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }();
  return root;
}

int cli(const std::string& args) {
  const std::string cmd = std::string("\"") + PROXYGAME_CLI_PATH + "\" " + args + " > \"" +
                          (scratch() / "stdout.txt").string() + "\" 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

fs::path write_config(const std::string& name, const std::string& body) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << body;
  return p;
}

std::size_t lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

const char* kSmall = R"({"schedule": {"total_stages": 120, "birth_interval": 60}, "censor": {"strategy": "aggressive"}})";

}  // namespace

TEST(Cli, RunWritesCsvAndSummary) {
  const auto cfg = write_config("small.json", kSmall);
  const fs::path out = scratch() / "run-a";
  ASSERT_EQ(cli("run --config " + cfg.string() + " --seed 7 --out " + out.string()), 0) << slurp(scratch() / "stdout.txt");
  const std::string csv = slurp(out / "metrics.csv");
  EXPECT_EQ(lines(csv), 121u);
  EXPECT_NE(slurp(out / "summary.txt").find("connected_ratio.window_mean:"), std::string::npos);
  EXPECT_NE(slurp(out / "config.json").find("\"seed\": 7"), std::string::npos);
  EXPECT_NE(slurp(scratch() / "stdout.txt").find("stages: 120"), std::string::npos);
}

TEST(Cli, RunsAreByteIdentical) {
  const auto cfg = write_config("small2.json", kSmall);
  ASSERT_EQ(cli("run --config " + cfg.string() + " --seed 3 --out " + (scratch() / "d1").string()), 0);
  ASSERT_EQ(cli("run --config " + cfg.string() + " --seed 3 --out " + (scratch() / "d2").string()), 0);
  EXPECT_EQ(slurp(scratch() / "d1" / "metrics.csv"), slurp(scratch() / "d2" / "metrics.csv"));
  ASSERT_EQ(cli("compare " + (scratch() / "d1").string() + " " + (scratch() / "d2").string() + " --out " +
                (scratch() / "cmp").string()),
            0);
  EXPECT_TRUE(fs::exists(scratch() / "cmp" / "compare.csv"));
}

TEST(Cli, InvalidConfigRejected) {
  const auto cfg = write_config("bad.json", R"({"utility": {"eta": 10}})");
  EXPECT_NE(cli("run --config " + cfg.string() + " --out " + (scratch() / "bad").string()), 0);
  EXPECT_NE(slurp(scratch() / "stdout.txt").find("utility.eta"), std::string::npos);
  EXPECT_FALSE(fs::exists(scratch() / "bad" / "metrics.csv"));
}

TEST(Cli, UnknownPresetListsNames) {
  EXPECT_NE(cli("preset nonsense --out " + (scratch() / "x").string()), 0);
  EXPECT_NE(slurp(scratch() / "stdout.txt").find("slow-optimal"), std::string::npos);
}

TEST(Cli, PresetWithOverridesAndSeeds) {
  const fs::path out = scratch() / "preset";
  ASSERT_EQ(cli("--seeds 2 --workers 2 preset baseline-compare --set schedule.total_stages=50 "
                "schedule.birth_interval=20 --out " + out.string()),
            0)
      << slurp(scratch() / "stdout.txt");
  for (const char* label : {"game_theoretic", "uniform_random"}) {
    EXPECT_EQ(lines(slurp(out / label / "seed-1" / "metrics.csv")), 51u);
    EXPECT_EQ(lines(slurp(out / label / "seed-2" / "metrics.csv")), 51u);
    EXPECT_EQ(lines(slurp(out / label / "mean.csv")), 51u);
  }
  EXPECT_NE(slurp(out / "summary.txt").find("[uniform_random]"), std::string::npos);
}

TEST(Cli, CompareRejectsMissingRuns) {
  EXPECT_NE(cli("compare " + (scratch() / "nope1").string() + " " + (scratch() / "nope2").string()), 0);
}

TEST(Cli, DefaultOutputRootFromEnvironment) {
  const auto cfg = write_config("env.json", kSmall);
  const fs::path root = scratch() / "envroot";
  const std::string cmd = "PROXYGAME_OUT=\"" + root.string() + "\" ";
  const int rc = std::system((cmd + "\"" + PROXYGAME_CLI_PATH + "\" run --config " + cfg.string() +
                              " --seed 5 > /dev/null 2>&1")
                                 .c_str());
  EXPECT_EQ(rc, 0);
  EXPECT_TRUE(fs::exists(root / "run-seed5" / "metrics.csv"));
}
