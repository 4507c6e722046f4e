// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "dense_oracle.hpp"
#include "json.hpp"
#include "pqe/experiment.hpp"

namespace fs = std::filesystem;
namespace ex = pqe::experiment;

namespace {

class ExperimentTest : public ::testing::Test {
 protected:
  void SetUp() override {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    dir_ = fs::temp_directory_path() / (std::string("pqe_exp_") + info->name() + "_" + std::to_string(::getpid()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    for (const char* f : {"h2_0.75.fcidump", "h4_1.00.fcidump", "h4_1.50.fcidump"}) {
      fs::copy_file(oracle::fixture(f), dir_ / f);
    }
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path write(const std::string& name, const std::string& text) {
    std::ofstream(dir_ / name) << text;
    return dir_ / name;
  }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  ex::ExperimentConfig parse(const std::string& text) {
    std::istringstream in(text);
    return ex::parse_config(in, dir_);
  }

  fs::path dir_;
};

// Data rows of a versioned CSV (schema comment and header skipped).
std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string x; std::getline(ls, x, ',');) f.push_back(x);
    rows.push_back(f);
  }
  return rows;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(PQE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_F(ExperimentTest, ConfigDefaultsAndOverrides) {
  const auto c = parse(
      "# comment\n"
      "method = spqe\n"
      "fixture = h4_1.00.fcidump   # trailing comment\n"
      "spqe.omega = 0.05\n"
      "pqe.diis_error = step\n"
      "seed = 9\n");
  EXPECT_EQ(c.method, ex::Method::kSpqe);
  EXPECT_DOUBLE_EQ(c.spqe.omega, 0.05);
  EXPECT_DOUBLE_EQ(c.spqe.dt, 0.05);
  EXPECT_EQ(c.spqe.micro.diis_error, pqe::DiisError::kStep);
  EXPECT_EQ(c.spqe.rng_seed, 9u);
  EXPECT_EQ(c.settings.at("pqe.omega_r"), "1e-5");
  EXPECT_EQ(c.settings.at("spqe.omega"), "0.05");
}

TEST_F(ExperimentTest, ConfigErrors) {
  EXPECT_THROW(parse("fixture = h2_0.75.fcidump\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nfixture = missing.fcidump\n"), ex::UserError);
  EXPECT_THROW(parse("method = qpe\nfixture = h2_0.75.fcidump\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nmethod = vqe\nfixture = h2_0.75.fcidump\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nfixture = h2_0.75.fcidump\nbogus = 1\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nfixture = h2_0.75.fcidump\npqe.omega_r = -1\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nfixture = h2_0.75.fcidump\nspqe.dt = abc\n"), ex::UserError);
  EXPECT_THROW(parse("method = pqe\nfixture h2_0.75.fcidump\n"), ex::UserError);
  try {
    parse("method = pqe\nfixture = h2_0.75.fcidump\n\nansatz.pool = weird\n");
    FAIL();
  } catch (const ex::UserError& e) {
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST_F(ExperimentTest, FciMatchesSolverAndCaches) {
  auto c = parse("method = fci\nfixture = h2_0.75.fcidump\n");
  std::ostringstream os;
  EXPECT_EQ(ex::cmd_fci(c, dir_ / "fci", os), 0);
  const double e = pqe::fci_solve(pqe::load_fcidump(dir_ / "h2_0.75.fcidump")).energies[0];
  EXPECT_NEAR(std::stod(os.str()), e, 1e-11);
  EXPECT_TRUE(fs::exists(dir_ / "h2_0.75.fcidump.fci.json"));
  const auto cached = ex::fci_reference(dir_ / "h2_0.75.fcidump", {}, true);
  ASSERT_TRUE(cached.has_value());
  EXPECT_EQ(*cached, e);
  // A stale cache (hash mismatch) is ignored.
  std::ofstream(dir_ / "h2_0.75.fcidump.fci.json")
      << R"({"schema":"pqe-fci-cache/1","fixture_fnv1a":"0000000000000000","energy":1.0})";
  EXPECT_EQ(*ex::fci_reference(dir_ / "h2_0.75.fcidump", {}, true), e);
}

TEST_F(ExperimentTest, RunIsDeterministicAndComplete) {
  auto c = parse("method = pqe\nfixture = h4_1.00.fcidump\n");
  ASSERT_EQ(ex::cmd_run(c, dir_ / "a"), 0);
  ASSERT_EQ(ex::cmd_run(c, dir_ / "b"), 0);
  for (const char* f : {"trace.csv", "summary.json", "ansatz.txt"}) {
    EXPECT_EQ(slurp(dir_ / "a" / f), slurp(dir_ / "b" / f)) << f;
  }
  const auto j = nlohmann::json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_TRUE(j["converged"].get<bool>());
  EXPECT_EQ(j["num_parameters"].get<int>(), 26);
  EXPECT_EQ(j["provenance"]["fixture_fnv1a"].get<std::string>(), ex::fnv1a_file(dir_ / "h4_1.00.fcidump"));
  EXPECT_EQ(j["provenance"]["settings"]["pqe.omega_r"].get<std::string>(), "1e-5");
  EXPECT_LT(j["delta_e"].get<double>(), 1e-2);
  EXPECT_EQ(slurp(dir_ / "a" / "trace.csv").rfind("# pqe-trace/1\n", 0), 0u);
}

TEST_F(ExperimentTest, SpqeHugeThresholdIsHartreeFock) {
  auto c = parse("method = spqe\nfixture = h4_1.00.fcidump\nspqe.omega = 10\n");
  const auto a = ex::run_single(c);
  EXPECT_TRUE(a.converged);
  EXPECT_EQ(a.num_parameters, 0u);
  const auto p = pqe::load_fcidump(dir_ / "h4_1.00.fcidump");
  EXPECT_NEAR(a.energy, pqe::determinant_energy(p, pqe::reference_determinant(p)), 1e-12);
}

TEST_F(ExperimentTest, SinglePointScanEqualsRun) {
  auto c = parse("method = spqe\nfixture = h4_1.50.fcidump\nspqe.omega = 0.05\n");
  ASSERT_EQ(ex::cmd_run(c, dir_ / "run"), 0);
  ASSERT_EQ(ex::cmd_scan(c, dir_ / "scan", 2), 0);
  EXPECT_EQ(slurp(dir_ / "run" / "trace.csv"), slurp(dir_ / "scan" / "point_000" / "trace.csv"));
  const std::string scan = slurp(dir_ / "scan" / "scan.csv");
  EXPECT_NE(scan.find("h4_1.50.fcidump,0.05,ok,"), std::string::npos) << scan;
}

TEST_F(ExperimentTest, ScanReportsFailingPoints) {
  // A one-iteration PQE cannot converge; every point is flagged, none aborts the scan.
  auto c = parse(
      "method = pqe\nscan.fixtures = h4_1.00.fcidump, h4_1.50.fcidump\npqe.max_iterations = 1\n");
  EXPECT_EQ(ex::cmd_scan(c, dir_ / "scan", 0), 2);
  const std::string scan = slurp(dir_ / "scan" / "scan.csv");
  EXPECT_NE(scan.find("h4_1.00.fcidump,0.1,not_converged"), std::string::npos) << scan;
  EXPECT_NE(scan.find("h4_1.50.fcidump,0.1,not_converged"), std::string::npos) << scan;
}

TEST_F(ExperimentTest, NoiseStudyZeroSigmaHasZeroVariance) {
  auto c = parse("method = pqe\nfixture = h4_1.00.fcidump\nnoise.ensemble = 3\n");
  ASSERT_EQ(ex::cmd_noise_study(c, dir_ / "noise", 3), 0);
  const auto rows = csv_rows(slurp(dir_ / "noise" / "noise.csv"));
  ASSERT_GT(rows.size(), 2u);
  for (const auto& f : rows) {
    ASSERT_EQ(f.size(), 6u);
    EXPECT_EQ(std::stod(f[3]), 0.0);
    EXPECT_EQ(std::stod(f[5]), 0.0);
  }
  // Iteration 1 of the ensemble equals a single noiseless run.
  const auto single = csv_rows(ex::run_single(c).trace_csv);
  EXPECT_EQ(rows[0][2], single[0][3]);
  c.ensemble = 1;
  EXPECT_THROW(ex::cmd_noise_study(c, dir_ / "bad", 1), ex::UserError);
}

TEST_F(ExperimentTest, NoiseStudyIsThreadCountInvariant) {
  auto c = parse("method = pqe\nfixture = h4_1.00.fcidump\nnoise.ensemble = 4\nnoise.sigma = 1e-4\n"
                 "pqe.max_iterations = 15\nseed = 11\n");
  ASSERT_EQ(ex::cmd_noise_study(c, dir_ / "t1", 1), 0);
  ASSERT_EQ(ex::cmd_noise_study(c, dir_ / "t4", 4), 0);
  EXPECT_EQ(slurp(dir_ / "t1" / "noise.csv"), slurp(dir_ / "t4" / "noise.csv"));
  EXPECT_EQ(slurp(dir_ / "t1" / "summary.json"), slurp(dir_ / "t4" / "summary.json"));
}

TEST_F(ExperimentTest, AnsatzFileChaining) {
  auto c = parse("method = spqe\nfixture = h4_1.00.fcidump\nspqe.omega = 0.05\n");
  ASSERT_EQ(ex::cmd_run(c, dir_ / "spqe"), 0);
  auto v = parse("method = vqe\nfixture = h4_1.00.fcidump\nansatz.file = spqe/ansatz.txt\n");
  const auto a = ex::run_single(v);
  EXPECT_TRUE(a.converged);
  const auto s = nlohmann::json::parse(slurp(dir_ / "spqe" / "summary.json"));
  EXPECT_EQ(a.num_parameters, s["num_parameters"].get<std::size_t>());
  EXPECT_NEAR(a.energy, s["energy"].get<double>(), 1e-6);
}

TEST_F(ExperimentTest, CliExitCodes) {
  const fs::path ok = write("ok.cfg", "method = pqe\nfixture = h2_0.75.fcidump\n");
  const fs::path bad = write("bad.cfg", "method = pqe\nfixture = h2_0.75.fcidump\nnope = 1\n");
  const fs::path slow = write("slow.cfg", "method = pqe\nfixture = h4_1.00.fcidump\npqe.max_iterations = 1\n");
  EXPECT_EQ(run_cli("run --config " + ok.string() + " --out " + (dir_ / "o1").string()), 0);
  EXPECT_TRUE(fs::exists(dir_ / "o1" / "summary.json"));
  EXPECT_EQ(run_cli("run --config " + bad.string() + " --out " + (dir_ / "o2").string()), 1);
  EXPECT_EQ(run_cli("run --config " + (dir_ / "absent.cfg").string() + " --out x"), 1);
  EXPECT_EQ(run_cli("run --config " + slow.string() + " --out " + (dir_ / "o3").string()), 2);
  EXPECT_EQ(run_cli("fci --fixture " + (dir_ / "h2_0.75.fcidump").string()), 0);
  EXPECT_EQ(run_cli("frobnicate"), 1);
  EXPECT_EQ(run_cli("run --config " + ok.string() + " --out " + (dir_ / "o4").string() + " --seed 5"), 0);
  const auto j = nlohmann::json::parse(slurp(dir_ / "o4" / "summary.json"));
  EXPECT_EQ(j["provenance"]["seed"].get<int>(), 5);
}
