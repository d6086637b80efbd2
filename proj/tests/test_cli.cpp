#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string command = std::string(SUPERRAD_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("superrad_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    const auto path = dir_ / name;
    std::ofstream(path) << text;
    return path;
  }

  fs::path dir_;
};

constexpr const char* kSmallRun =
    "n_atoms = 4\nn_electrons = 3\ng_re = 0.1\nsigma = 3\nt_end = 1\ndt_max = 0.01\n";

TEST_F(Cli, SimulateWritesRunFiles) {
  const auto config = write("run.conf", kSmallRun);
  EXPECT_EQ(run_cli("simulate --config " + config.string() + " --out " + (dir_ / "out").string()), 0);
  for (const char* name : {"intensity.csv", "rho_post.csv", "spectrum.csv"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / name)) << name;
  }
}

TEST_F(Cli, OverridesWithoutConfigFile) {
  EXPECT_EQ(run_cli("simulate --set n_atoms=2 --set g_re=0.05 --set t_end=0.5 --out " +
                    (dir_ / "out").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "out" / "intensity.csv"));
}

TEST_F(Cli, ConfigErrorsExitTwo) {
  const auto bad = write("bad.conf", "n_atoms = 4\nbogus = 1\n");
  EXPECT_EQ(run_cli("simulate --config " + bad.string()), 2);
  EXPECT_EQ(run_cli("simulate --config " + (dir_ / "missing.conf").string()), 2);
  EXPECT_EQ(run_cli("simulate --set n_atoms=4"), 2);
  EXPECT_EQ(run_cli("simulate --set g_re=0.1 --set d_perp=1e-29"), 2);
  EXPECT_EQ(run_cli("frobnicate"), 2);
  EXPECT_EQ(run_cli("sweep --set g_re=0.1 --axis bogus --values 1..3"), 2);
}

TEST_F(Cli, OversizedCouplingExitsThree) {
  EXPECT_EQ(run_cli("simulate --set n_atoms=2 --set g_re=1.6 --out " + (dir_ / "out").string()), 3);
}

TEST_F(Cli, UnwritableOutputExitsFour) {
  const auto blocker = write("blocker", "x");
  EXPECT_EQ(run_cli("simulate --set n_atoms=2 --set g_re=0.1 --set t_end=0.5 --out " +
                    (blocker / "out").string()),
            4);
}

TEST_F(Cli, SweepWritesTable) {
  const auto config = write("run.conf", kSmallRun);
  EXPECT_EQ(run_cli("sweep --config " + config.string() + " --axis n_electrons --values 1..3 --workers 2" +
                    " --observable excitation_energy --out " + (dir_ / "sweep").string()),
            0);
  EXPECT_TRUE(fs::exists(dir_ / "sweep" / "sweep.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "sweep" / "points" / "n_electrons_3" / "rho_post.csv"));
}

TEST_F(Cli, ValidatePasses) { EXPECT_EQ(run_cli("validate"), 0); }

}  // namespace
