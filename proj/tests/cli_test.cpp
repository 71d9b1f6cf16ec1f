#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "nematic/config.hpp"
#include "nematic/experiment.hpp"

namespace fs = std::filesystem;

namespace {

struct RunOutput {
  int code;
  std::string text;
};

class CliTest : public ::testing::Test {
 protected:
  fs::path dir;

  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("nematic_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  RunOutput run(const std::string& args) const {
    const fs::path log = dir / "stdout.txt";
    const std::string cmd = "NEMATIC_OUT_DIR='" + dir.string() + "' '" NEMATIC_CLI "' " + args + " > '" + log.string() + "' 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  fs::path write_config(const std::string& name, const std::string& body) const {
    const fs::path p = dir / name;
    std::ofstream(p) << body;
    return p;
  }

  static std::string read(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  static std::string config(const std::string& name) { return std::string(NEMATIC_CONFIG_DIR) + "/" + name; }
};

}  // namespace

TEST_F(CliTest, SpecfunTableHasPotentialMinimumAtEquilibrium) {
  const fs::path out = dir / "table.csv";
  const auto r = run("specfun-table --gamma 6 --out '" + out.string() + "'");
  ASSERT_EQ(r.code, 0) << r.text;
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "r,lambda,w_gamma,w_gamma_prime");
  const double r_eq = nematic::make_params(6.0, 0.05).r_eq();
  double best_w = INFINITY, best_r = -1.0;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    double rv, lam, w, wp;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &rv, &lam, &w, &wp), 4) << line;
    if (w < best_w) best_w = w, best_r = rv;
    ++rows;
  }
  EXPECT_GE(rows, 1000u);
  EXPECT_NEAR(best_w, 0.0, 1e-12);
  EXPECT_NEAR(best_r, r_eq, 1e-12);
}

TEST_F(CliTest, ConfigRoundTrip) {
  const auto c = nematic::Config::load(config("kinetic_two_vortex.cfg"));
  const auto again = nematic::Config::parse(c.serialize());
  EXPECT_EQ(c.entries(), again.entries());
  EXPECT_EQ(again.serialize(), c.serialize());
}

TEST_F(CliTest, ConfigErrorsAreListedTogether) {
  const auto p = write_config("bad.cfg",
                              "tier = kinetic\nparams.gamma = abc\ngrid.nx = 2\ntime.dt = -1\nbogus.key = 1\n");
  const auto r = run("simulate --config '" + p.string() + "'");
  EXPECT_EQ(r.code, 2);
  for (const char* key : {"params.gamma", "grid.nx", "time.dt", "time.t_end", "bogus.key"})
    EXPECT_NE(r.text.find(key), std::string::npos) << key << "\n" << r.text;
  EXPECT_EQ(run("simulate --config '" + (dir / "missing.cfg").string() + "'").code, 2);
  EXPECT_EQ(run("simulate").code, 2);
}

TEST_F(CliTest, SimulationIsDeterministic) {
  const auto p = write_config("small.cfg",
                              "tier = closure\nparams.gamma = 6\nparams.epsilon = 0.1\ngrid.nx = 17\n"
                              "boundary.type = winding\ninitial.type = multivortex\ninitial.vortices = 0.1,0.05,1\n"
                              "time.dt = 1e-4\ntime.t_end = 1e-3\ntime.output_every = 5e-4\noutput.dir = a\n");
  ASSERT_EQ(run("simulate --config '" + p.string() + "'").code, 0);
  const std::string first = read(dir / "a" / "diagnostics.csv");
  const std::string field = read(dir / "a" / "final_n.csv");
  ASSERT_EQ(run("simulate --config '" + p.string() + "'").code, 0);
  EXPECT_FALSE(first.empty());
  EXPECT_EQ(first, read(dir / "a" / "diagnostics.csv"));
  EXPECT_EQ(field, read(dir / "a" / "final_n.csv"));
}

TEST_F(CliTest, KineticRunWritesArtifacts) {
  const auto p = write_config("kin.cfg",
                              "tier = kinetic\nparams.gamma = 6\nparams.epsilon = 0.1\ngrid.nx = 17\n"
                              "boundary.type = winding\ninitial.type = multivortex\ninitial.vortices = 0.1,0.05,1\n"
                              "kinetic.k_max = 4\ntime.dt = 1e-4\ntime.t_end = 5e-4\noutput.dir = kin\n");
  const auto r = run("simulate --config '" + p.string() + "'");
  ASSERT_EQ(r.code, 0) << r.text;
  for (const char* name : {"run.json", "diagnostics.csv", "final_n.csv", "snapshot_000000.nemf", "snapshot_000001.nemf"}) {
    ASSERT_TRUE(fs::exists(dir / "kin" / name)) << name;
    EXPECT_GT(fs::file_size(dir / "kin" / name), 0u) << name;
  }
  const auto meta = nlohmann::json::parse(read(dir / "kin" / "run.json"));
  EXPECT_EQ(meta["status"], "ok");
  EXPECT_EQ(meta["config"]["tier"], "kinetic");
}

TEST_F(CliTest, UnstableStepExitsWithThree) {
  const auto p = write_config("unstable.cfg",
                              "tier = closure\nparams.gamma = 6\nparams.epsilon = 0.1\ngrid.nx = 17\n"
                              "time.rescaled = false\ntime.dt = 0.5\ntime.t_end = 1\noutput.dir = u\n");
  EXPECT_EQ(run("simulate --config '" + p.string() + "'").code, 3);
}

TEST_F(CliTest, StrictHaltOnCloseApproach) {
  const auto plain = run("simulate --config '" + config("vortex_annihilation.cfg") + "'");
  ASSERT_EQ(plain.code, 0) << plain.text;
  const std::string csv = read(dir / "vortex_annihilation" / "vortex-trajectory.csv");
  EXPECT_NE(csv.find("# status=close-approach"), std::string::npos);
  EXPECT_EQ(run("simulate --strict-halt --config '" + config("vortex_annihilation.cfg") + "'").code, 4);
  EXPECT_EQ(run("simulate --strict-halt --config '" + config("vortex_free_pair.cfg") + "'").code, 0);
}

TEST_F(CliTest, ValidateSubset) {
  const auto r = run("validate --config '" + config("validate_quick.cfg") + "'");
  ASSERT_EQ(r.code, 0) << r.text;
  EXPECT_NE(r.text.find("3 of 3 criteria passed"), std::string::npos) << r.text;
  const std::string csv = read(dir / "validate_quick" / "validate.csv");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  EXPECT_TRUE(fs::exists(dir / "validate_quick" / "run.json"));
  const auto bad = write_config("bad_validate.cfg", "tier = validate\nvalidate.criteria = 1, 13, x\n");
  const auto e = run("validate --config '" + bad.string() + "'");
  EXPECT_EQ(e.code, 2);
  EXPECT_NE(e.text.find("'13'"), std::string::npos);
  EXPECT_NE(e.text.find("'x'"), std::string::npos);
}

TEST_F(CliTest, MaxslopeDemo) {
  const fs::path out = dir / "demo.csv";
  ASSERT_EQ(run("maxslope-demo --out '" + out.string() + "'").code, 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "epsilon,sup_distance");
  double prev = INFINITY;
  int rows = 0;
  while (std::getline(in, line)) {
    double e, d;
    ASSERT_EQ(std::sscanf(line.c_str(), "%lf,%lf", &e, &d), 2);
    EXPECT_LT(d, prev);
    prev = d;
    ++rows;
  }
  EXPECT_EQ(rows, 3);
}

TEST_F(CliTest, SampleConfigsResolve) {
  for (const auto& entry : fs::directory_iterator(NEMATIC_CONFIG_DIR)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(nematic::resolve_config(nematic::Config::load(entry.path().string()))) << entry.path();
  }
}
