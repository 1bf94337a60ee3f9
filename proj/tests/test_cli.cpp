// Runs the installed-style binary; checks exit codes and the files it writes.
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("lsiib_cli_") + info->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  Outcome run(const std::string& args) {
    const auto out = dir_ / "stdout.txt", err = dir_ / "stderr.txt";
    const std::string cmd = std::string("\"") + LSIIB_SIM_PATH + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                            err.string() + "\"";
    const int status = std::system(cmd.c_str());
    Outcome o;
    o.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    o.out = slurp(out);
    o.err = slurp(err);
    return o;
  }

  std::string config(const std::string& name) { return std::string("--config \"") + LSIIB_CONFIG_DIR + "/" + name + "\""; }

  fs::path write_config(const std::string& text) {
    const auto p = dir_ / "custom.ini";
    std::ofstream(p) << text;
    return p;
  }

  std::string output() { return "--output \"" + (dir_ / "out").string() + "\""; }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, ShippedConfigsRun) {
  for (const char* name : {"blockade.ini", "blockade_control.ini", "ladder_spectrum.ini", "cnot_bell.ini",
                           "interlink.ini", "cavity_anchor.ini", "cavity_5cm.ini"}) {
    const auto o = run(config(name) + " " + output());
    EXPECT_EQ(o.code, 0) << name << ": " << o.err;
    EXPECT_FALSE(o.out.empty()) << name;
  }
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
  EXPECT_TRUE(fs::exists(dir_ / "out" / "trajectory.csv"));
}

TEST_F(Cli, BlockadeSummary) {
  const auto o = run(config("blockade.ini") + " " + output());
  ASSERT_EQ(o.code, 0) << o.err;
  EXPECT_NE(o.out.find("pi_time=47."), std::string::npos) << o.out;
}

TEST_F(Cli, QuietSuppressesSummary) {
  const auto o = run(config("cavity_anchor.ini") + " " + output() + " --quiet");
  EXPECT_EQ(o.code, 0);
  EXPECT_TRUE(o.out.empty());
  EXPECT_TRUE(fs::exists(dir_ / "out" / "report.json"));
}

TEST_F(Cli, MissingConfigFlagIsUsageError) { EXPECT_EQ(run("").code, 2); }

TEST_F(Cli, UnreadableConfigIsConfigError) {
  const auto o = run("--config \"" + (dir_ / "nope.ini").string() + "\"");
  EXPECT_EQ(o.code, 2);
  EXPECT_FALSE(o.err.empty());
}

TEST_F(Cli, InvalidConfigListsEveryIssue) {
  const auto p = write_config("[experiment]\ntype = cavity\n[cavity]\nlength = -1\nmode_diameter = x\n");
  const auto o = run("--config \"" + p.string() + "\" " + output());
  EXPECT_EQ(o.code, 2);
  EXPECT_NE(o.err.find("cavity.length"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("cavity.mode_diameter"), std::string::npos) << o.err;
  EXPECT_NE(o.err.find("cavity.mirror_transmittivity"), std::string::npos) << o.err;
}

TEST_F(Cli, PhysicsPreconditionExitsThree) {
  auto text = slurp(fs::path(LSIIB_CONFIG_DIR) / "cnot_bell.ini");
  text.replace(text.find("xi = 1"), 6, "xi = 3");
  const auto o = run("--config \"" + write_config(text).string() + "\" " + output());
  EXPECT_EQ(o.code, 3) << o.err;
}

TEST_F(Cli, SweepWritesTable) {
  const auto o = run(config("sweep_omega1.ini") + " " + output());
  ASSERT_EQ(o.code, 0) << o.err;
  const auto csv = slurp(dir_ / "out" / "sweep.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "index,ladder.omega1,omega_ro,pi_time,max_P_C1,max_P_C2,blockade_shift");
}

TEST_F(Cli, Version) {
  const auto o = run("--version");
  EXPECT_EQ(o.code, 0);
  EXPECT_FALSE(o.out.empty());
}
