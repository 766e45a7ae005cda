#include "apriori/commands.hpp"
#include "apriori/io.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

using namespace apriori;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("apriori_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& cmd, const std::string& config, const std::string& out = "out",
          std::optional<std::uint64_t> seed = std::nullopt) {
    const fs::path cfg = dir_ / (cmd + ".json");
    std::ofstream(cfg) << config;
    CommandOptions o;
    o.config = cfg;
    o.out = dir_ / out;
    o.seed = seed;
    std::ostringstream log;
    const int code = run_command(cmd, o, log);
    last_log_ = log.str();
    return code;
  }

  fs::path dir_;
  std::string last_log_;
};

}  // namespace

TEST_F(CliTest, ExponentsReproduceGoldenFile) {
  const std::string cfg = slurp(fs::path(APRIORI_TEST_DATA) / "phi3_config.json");
  ASSERT_FALSE(cfg.empty());
  ASSERT_EQ(run("exponents", cfg), io::kOk) << last_log_;
  EXPECT_EQ(slurp(dir_ / "out" / "exponents.json"), slurp(fs::path(APRIORI_TEST_DATA) / "phi3_exponents.golden.json"));
}

TEST_F(CliTest, MalformedConfigLeavesNoOutput) {
  EXPECT_EQ(run("exponents", "{\"schema_version\": 1, \"equation\": "), io::kSchema);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
  EXPECT_EQ(run("exponents", R"({"schema_version": 1, "equation": {"case": "pde", "p": "3", "kind": "f_constant",
    "beta": "-1/2", "colour": "red"}})"),
            io::kSchema);
  EXPECT_NE(last_log_.find("colour"), std::string::npos);
  EXPECT_EQ(run("sample", R"({"schema_version": 2})"), io::kSchema);
  EXPECT_EQ(run("sample", R"({"schema_version": 1, "command": "solve"})"), io::kSchema);
  EXPECT_EQ(run("sample", R"({"schema_version": 1, "hurst": "high"})"), io::kSchema);
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, MissingConfigIsIoError) {
  CommandOptions o;
  o.config = dir_ / "nope.json";
  o.out = dir_;
  std::ostringstream log;
  EXPECT_EQ(run_command("trees", o, log), io::kIo);
}

TEST_F(CliTest, FailedAssumptionExitsNonzero) {
  // alpha + 2 + beta < 0
  EXPECT_EQ(run("exponents", R"({"schema_version": 1, "equation": {"case": "pde", "p": "3", "d": 2,
    "kind": "f_constant", "beta": "-7/2"}})"),
            io::kAssumption);
}

TEST_F(CliTest, TreesWritesEnumeration) {
  ASSERT_EQ(run("trees", R"({"schema_version": 1, "rule": {"kind": "f_phi_only", "beta": "-6/5", "d": 2},
    "omega": "0"})"),
            io::kOk)
      << last_log_;
  const auto j = io::Json::parse(slurp(dir_ / "out" / "trees.json"));
  EXPECT_GT(j["trees"].size(), 3u);
  EXPECT_EQ(j["min_hom"], "-6/5");
}

TEST_F(CliTest, SampleIsDeterministicPerSeed) {
  const std::string cfg = R"({"schema_version": 1, "seed": 5, "hurst": 0.6, "grid_size": 65, "lift": true})";
  ASSERT_EQ(run("sample", cfg, "a"), io::kOk) << last_log_;
  ASSERT_EQ(run("sample", cfg, "b"), io::kOk);
  ASSERT_EQ(run("sample", cfg, "c", 6), io::kOk);
  EXPECT_EQ(slurp(dir_ / "a" / "path.bin"), slurp(dir_ / "b" / "path.bin"));
  EXPECT_EQ(slurp(dir_ / "a" / "path.csv"), slurp(dir_ / "b" / "path.csv"));
  EXPECT_NE(slurp(dir_ / "a" / "path.bin"), slurp(dir_ / "c" / "path.bin"));
  std::ifstream in(dir_ / "a" / "path.bin", std::ios::binary);
  EXPECT_EQ(read_path_binary(in).size(), 65);
}

TEST_F(CliTest, SolveOdeAndPde) {
  ASSERT_EQ(run("solve", R"({"schema_version": 1, "equation": "ode", "grid_size": 129, "initial": 100,
    "rough": true})", "ode"),
            io::kOk)
      << last_log_;
  EXPECT_EQ(slurp(dir_ / "ode" / "solution.csv").substr(0, 7), "t,phi1\n");
  ASSERT_EQ(run("solve", R"({"schema_version": 1, "equation": "pde", "nt": 17, "nx": 17, "amplitude": 0,
    "boundary": 5})", "pde"),
            io::kOk)
      << last_log_;
  std::ifstream in(dir_ / "pde" / "field.bin", std::ios::binary);
  const GridField f = read_field(in);
  EXPECT_EQ(f.nt, 17);
  EXPECT_LT(std::abs(f.at(16, 8)), 5.0);
}

TEST_F(CliTest, VerifyWritesReportAndSummary) {
  const std::string cfg = R"({"schema_version": 1, "seed": 3, "trials": 2,
    "bound": {"id": "young_sharp", "p": 3, "gamma": 0.7},
    "experiment": {"hurst": 0.75, "grid_size": 129},
    "axis": {"name": "initial", "values": [1, 100]}})";
  ASSERT_EQ(run("verify", cfg, "a"), io::kOk) << last_log_;
  ASSERT_EQ(run("verify", cfg, "b"), io::kOk);
  const std::string csv = slurp(dir_ / "a" / "report.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "bound_id,trial,seed,z,lhs,rhs_driver,rhs_dist,ratio,flags");
  EXPECT_EQ(csv, slurp(dir_ / "b" / "report.csv"));
  EXPECT_EQ(slurp(dir_ / "a" / "summary.json"), slurp(dir_ / "b" / "summary.json"));
  const auto j = io::Json::parse(slurp(dir_ / "a" / "summary.json"));
  EXPECT_GT(j["constant"]["c_star"].get<double>(), 0.0);
}

TEST_F(CliTest, IdentitySuitePasses) {
  ASSERT_EQ(run("identity_suite", R"({"schema_version": 1, "max_vertices": 3, "instances": 20})"), io::kOk)
      << last_log_;
  const auto j = io::Json::parse(slurp(dir_ / "out" / "identity.json"));
  EXPECT_TRUE(j["ok"].get<bool>());
}

TEST_F(CliTest, UnknownCommand) {
  EXPECT_EQ(run("plot", R"({"schema_version": 1})"), io::kUsage);
}
