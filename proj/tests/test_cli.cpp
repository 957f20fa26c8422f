#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kCli = INTERDICT_CLI;
const std::string kData = INTERDICT_DATA_DIR;

fs::path scratch() {
  static const fs::path p = [] {
    auto d = fs::temp_directory_path() / ("interdict_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return p;
}

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const auto log = scratch() / "last.log";
  const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + log.string() + "\" 2>&1";
  const int st = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  std::ifstream in(log);
  std::stringstream s;
  s << in.rdbuf();
  r.out = s.str();
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

// The compound run is shared by the verify tests.
const fs::path& compound_run() {
  static const fs::path dir = [] {
    const auto d = scratch() / "run1";
    const auto r = cli("scenario --config " + q(kData + "/configs/compound.cfg") + " --out " + q(d));
    EXPECT_EQ(r.code, 0) << r.out;
    return d;
  }();
  return dir;
}

}  // namespace

TEST(Cli, ScenarioWritesManifest) {
  const auto& dir = compound_run();
  std::ifstream in(dir / "manifest.json");
  ASSERT_TRUE(in);
  const auto j = nlohmann::json::parse(in);
  EXPECT_EQ(j["scenario"], "compound");
  EXPECT_GE(j["files"].size(), 4u);
  EXPECT_TRUE(j["bigm_valid"].get<bool>());
  EXPECT_GT(j["unserved_mwh"].get<double>(), 0.0);
  for (const auto& f : j["files"]) EXPECT_TRUE(fs::exists(dir / f["file"].get<std::string>())) << f;
}

TEST(Cli, VerifyUntouchedRun) {
  const auto r = cli("verify --solution " + q(compound_run()));
  EXPECT_EQ(r.code, 0) << r.out;
  EXPECT_NE(r.out.find("0 failed"), std::string::npos) << r.out;
}

TEST(Cli, VerifyCorruptedRunExitsTwo) {
  const auto bad = scratch() / "run1_bad";
  fs::remove_all(bad);
  fs::copy(compound_run(), bad, fs::copy_options::recursive);
  // Move one dispatch value by 25 MW.
  std::ifstream in(bad / "opf_solution.csv");
  std::string line, text;
  bool done = false;
  while (std::getline(in, line)) {
    if (!done && line.rfind("summer,15,", 0) == 0 && line.find(",g,") != std::string::npos) {
      const auto comma = line.rfind(',');
      line = line.substr(0, comma + 1) + std::to_string(std::stod(line.substr(comma + 1)) + 25.0);
      done = true;
    }
    text += line + "\n";
  }
  in.close();
  ASSERT_TRUE(done);
  std::ofstream(bad / "opf_solution.csv") << text;
  const auto r = cli("verify --solution " + q(bad));
  EXPECT_EQ(r.code, 2) << r.out;
  EXPECT_NE(r.out.find("hour 15"), std::string::npos) << r.out;
}

TEST(Cli, UnreadableSavedRunExitsOne) {
  const auto bad = scratch() / "run1_garbled";
  fs::remove_all(bad);
  fs::copy(compound_run(), bad, fs::copy_options::recursive);
  std::ofstream(bad / "opf_solution.csv", std::ios::app) << "summer,3,west_coal,g,not-a-number\n";
  EXPECT_EQ(cli("verify --solution " + q(bad)).code, 1);
}

TEST(Cli, MissingNetworkNamesThePath) {
  const auto r = cli("scenario --kind baseline --network /nonexistent/grid.json --out " + q(scratch() / "x"));
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("/nonexistent/grid.json"), std::string::npos) << r.out;
}

TEST(Cli, BadConfigValueExitsOne) {
  const auto cfg = scratch() / "bad.cfg";
  std::ofstream(cfg) << "kind = cyberattack\nbudget = -3\n";
  EXPECT_EQ(cli("scenario --config " + q(cfg) + " --out " + q(scratch() / "y")).code, 1);
}

TEST(Cli, UsageErrorsExitOne) {
  EXPECT_EQ(cli("").code, 1);
  EXPECT_EQ(cli("scenario").code, 1);  // --out is required
  EXPECT_EQ(cli("frobnicate --out x").code, 1);
  EXPECT_EQ(cli("scenario --budget lots --out x").code, 1);
  const auto help = cli("--help");
  EXPECT_EQ(help.code, 0);
  EXPECT_NE(help.out.find("sweep-gamma"), std::string::npos);
}

TEST(Cli, SolveOpfDumpsModels) {
  const auto out = scratch() / "opf";
  const auto r = cli("solve-opf --dump-lp --out " + q(out));
  ASSERT_EQ(r.code, 0) << r.out;
  EXPECT_TRUE(fs::exists(out / "lp" / "opf_summer_h0.lp"));
  EXPECT_TRUE(fs::exists(out / "lp" / "opf_summer_h23.lp"));
  EXPECT_EQ(cli("verify --solution " + q(out)).code, 0);
}
