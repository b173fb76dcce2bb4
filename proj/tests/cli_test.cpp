// End-to-end tests of the dockctl binary. The binary path comes from the
// DOCKCTL_BIN environment variable (set by ctest).

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

std::string dockctl_path() {
  const char* path = std::getenv("DOCKCTL_BIN");
  return path ? path : "";
}

int run_command(const std::string& args) {
  const std::string command = dockctl_path() + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    ASSERT_FALSE(dockctl_path().empty())
        << "DOCKCTL_BIN must point at the dockctl binary";
    dir_ = fs::temp_directory_path() /
           ("dockctl_test_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path dir_;
};

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run_command("--help"), 0);
  EXPECT_EQ(run_command("suite --help"), 0);
}

TEST_F(CliTest, UnknownFlagExitsUsage) {
  EXPECT_EQ(run_command("run s1 --bogus"), 2);
  EXPECT_EQ(run_command("frobnicate"), 2);
}

TEST_F(CliTest, RunBuiltinScenarioWritesArtifacts) {
  const fs::path out = dir_ / "run_out";
  EXPECT_EQ(run_command("run s1 --mode perfect --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "s1_trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "s1_result.json"));
  const std::string json = slurp(out / "s1_result.json");
  EXPECT_NE(json.find("\"docked\": true"), std::string::npos);
}

TEST_F(CliTest, MissingConfigFileExitsUsage) {
  EXPECT_EQ(run_command("run /nonexistent/config.json"), 2);
  EXPECT_EQ(run_command("run --config /nonexistent/config.json"), 2);
}

TEST_F(CliTest, MalformedConfigExitsUsage) {
  const fs::path config = dir_ / "bad.json";
  std::ofstream(config) << "{ this is not json";
  EXPECT_EQ(run_command("run " + config.string()), 2);
}

TEST_F(CliTest, UnreachableScenarioExitsNotDocked) {
  const fs::path config = dir_ / "unreachable.json";
  std::ofstream(config) << R"({
    "name": "unreachable",
    "initial_pose": {"x": 1.0, "y": 1.0, "phi_deg": 0},
    "t_max_s": 2.0,
    "controller": {"v_bounds": [0.0, 0.0]}
  })";
  const fs::path out = dir_ / "unreachable_out";
  EXPECT_EQ(run_command("run " + config.string() + " --out " + out.string()),
            1);
  const std::string json = slurp(out / "unreachable_result.json");
  EXPECT_NE(json.find("\"docked\": false"), std::string::npos);
}

TEST_F(CliTest, SuiteRunsAndSummarizes) {
  const fs::path out = dir_ / "suite_out";
  EXPECT_EQ(run_command("suite --mode perfect --out " + out.string()), 0);
  EXPECT_TRUE(fs::exists(out / "suite_summary.json"));
  EXPECT_TRUE(fs::exists(out / "s1_trajectory.csv"));
  EXPECT_TRUE(fs::exists(out / "s4_trajectory.csv"));
  const std::string json = slurp(out / "suite_summary.json");
  EXPECT_NE(json.find("\"average\""), std::string::npos);
  EXPECT_NE(json.find("\"all_docked\": true"), std::string::npos);
}

TEST_F(CliTest, RepeatedSimulatedSuiteIsByteIdentical) {
  const fs::path out_a = dir_ / "suite_a";
  const fs::path out_b = dir_ / "suite_b";
  EXPECT_EQ(
      run_command("suite --mode simulated --seed 7 --out " + out_a.string()),
      0);
  EXPECT_EQ(
      run_command("suite --mode simulated --seed 7 --out " + out_b.string()),
      0);
  for (const char* name :
       {"suite_summary.json", "s1_trajectory.csv", "s2_trajectory.csv",
        "s3_trajectory.csv", "s4_trajectory.csv"}) {
    EXPECT_EQ(slurp(out_a / name), slurp(out_b / name)) << name;
  }
}

TEST_F(CliTest, OutDirFallsBackToEnvironmentVariable) {
  const fs::path out = dir_ / "env_out";
  const std::string command = "DOCKCTL_OUT=" + out.string() + " " +
                              dockctl_path() +
                              " run s1 --mode perfect > /dev/null 2>&1";
  EXPECT_EQ(WEXITSTATUS(std::system(command.c_str())), 0);
  EXPECT_TRUE(fs::exists(out / "s1_trajectory.csv"));
}

TEST_F(CliTest, HorizonAndDtOverrides) {
  const fs::path out = dir_ / "override_out";
  EXPECT_EQ(run_command("run s1 --horizon 10 --dt 0.2 --out " + out.string()),
            0);
  const std::string csv = slurp(out / "s1_trajectory.csv");
  // Second line starts at t = 0; third line must show the 0.2 s timestep.
  std::istringstream is(csv);
  std::string header, row0, row1;
  std::getline(is, header);
  std::getline(is, row0);
  std::getline(is, row1);
  EXPECT_EQ(row1.substr(0, 4), "0.2,");
}

}  // namespace
