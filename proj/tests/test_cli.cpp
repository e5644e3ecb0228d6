#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "support.hpp"
#include "wavetorus/cli.hpp"

using namespace wavetorus;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wavetorus_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

nlohmann::json read_report(const fs::path& dir) {
  std::ifstream in(dir / "report.json");
  return nlohmann::json::parse(in);
}

std::string parse_failure(const std::string& text, const std::string& command = "") {
  try {
    cli::parse_config(text, command);
  } catch (const Error& e) {
    return std::string(to_string(e.code())) + "|" + e.what();
  }
  return "";
}

}  // namespace

TEST(Config, MinimalSolve) {
  const auto cfg = cli::parse_config(R"({"M": 8})", "solve");
  EXPECT_EQ(cfg.command, "solve");
  EXPECT_EQ(cfg.M, 8);
  EXPECT_EQ(cfg.sigma, 1);
  EXPECT_FALSE(cfg.seed);
}

TEST(Config, FullDocument) {
  const auto cfg = cli::parse_config(R"({
    "M": 24, "beta": {"start": 1e-1, "factor": 0.5, "floor": 1e-6}, "sigma": 1,
    "newton": {"tol": 1e-10, "max_iter": 40, "line_search": true},
    "nl": {"s": 3, "a": [{"j": 0, "c": 1.0}, {"j": 1, "c_sin": 0.5}],
           "m": {"kind": "tanh", "alpha": 1.0}, "b": []},
    "seed": 12345, "oversample": 4})",
                                     "continue");
  EXPECT_EQ(cfg.beta.factor, 0.5);
  EXPECT_EQ(*cfg.seed, 12345u);
  const auto nl = make_nonlinearity(cfg.nl);
  EXPECT_NEAR(nl.certificate().c01, 0.5, 1e-12);
  EXPECT_NEAR(nl.certificate().c02, 1.5, 1e-12);
  const auto none = cli::parse_config(R"({"nl": {"m": {"kind": "none"}}})", "solve");
  EXPECT_FALSE(none.nl.m);
}

TEST(Config, Errors) {
  const auto typo = parse_failure(R"({"M": 8, "betta": 0.1})", "solve");
  EXPECT_EQ(typo.rfind("ParseError", 0), 0u);
  EXPECT_NE(typo.find("betta"), std::string::npos);

  const auto nested = parse_failure(R"({"newton": {"tols": 1}})", "solve");
  EXPECT_NE(nested.find("newton.tols"), std::string::npos);

  const auto seed = parse_failure(R"({"verify": {"suites": ["hy"]}})", "verify");
  EXPECT_EQ(seed.rfind("ParseError", 0), 0u);
  EXPECT_NE(seed.find("seed"), std::string::npos);

  const auto schedule = parse_failure(R"({"beta": {"start": 0.1, "factor": 1.0, "floor": 1e-6}})", "continue");
  EXPECT_EQ(schedule.rfind("Schedule", 0), 0u);

  EXPECT_NE(parse_failure("{not json", "solve"), "");
  EXPECT_NE(parse_failure(R"({"M": "eight"})", "solve").find("M"), std::string::npos);
  EXPECT_NE(parse_failure(R"({"command": "solve"})", "multi"), "");
  EXPECT_NE(parse_failure(R"({})", "dance"), "");
  EXPECT_NE(parse_failure(R"({"seed": 1, "verify": {"suites": ["xx"]}})", "verify").find("suites[0]"),
            std::string::npos);
  EXPECT_NE(parse_failure(R"({"nl": {"m": {"kind": "sin"}}})", "solve").find("nl.m.kind"), std::string::npos);
}

TEST(Run, SolveManufacturedProblem) {
  const auto dir = scratch("solve");
  PenalizedProblem<> p{8, 1e-2, 1, make_nonlinearity(default_cubic_spec())};
  const auto target = 0.25 * random_field(9, 8, SubspaceTag::All, 0.5);
  write_field(dir / "forcing.json", residual(p, target));

  auto cfg = cli::parse_config(R"({"M": 8, "beta": 0.01})", "solve");
  cfg.forcing = (dir / "forcing.json").string();
  cfg.out_dir = (dir / "out").string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(cfg, log), cli::kOk) << log.str();
  const auto u = read_field(dir / "out" / "solution.json");
  EXPECT_LE((u - target).l2_norm(), 1e-9);
  const auto report = read_report(dir / "out");
  EXPECT_EQ(report["exit_code"], 0);
  EXPECT_EQ(report["provenance"]["version"], cli::kVersion);
  EXPECT_EQ(report["provenance"]["command"], "solve");
  EXPECT_TRUE(report["provenance"]["seed"].is_null());
}

TEST(Run, VerifyHausdorffYoungIsDeterministic) {
  const auto dir = scratch("verify");
  const std::string text = R"({"seed": 5, "verify": {"suites": ["hy"], "size": 50, "M": 10}})";
  auto cfg = cli::parse_config(text, "verify");
  std::ostringstream log;
  cfg.out_dir = (dir / "a").string();
  EXPECT_EQ(cli::run(cfg, log), cli::kOk);
  cfg.out_dir = (dir / "b").string();
  EXPECT_EQ(cli::run(cfg, log), cli::kOk);
  const auto a = read_report(dir / "a"), b = read_report(dir / "b");
  EXPECT_EQ(a, b);
  EXPECT_EQ(a["reports"][0]["violation_count"], 0);
  EXPECT_EQ(a["provenance"]["seed"], 5);
  EXPECT_EQ(a["provenance"]["config_hash"], cli::config_hash(nlohmann::json::parse(text)));
  EXPECT_TRUE(fs::exists(dir / "a" / "hy_p1.33333.csv"));
}

TEST(Run, ContinueWritesTraceAndApriori) {
  const auto dir = scratch("continue");
  auto cfg = cli::parse_config(R"({"M": 6, "beta": {"start": 0.1, "factor": 0.1, "floor": 1e-4}})", "continue");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(cfg, log), cli::kOk) << log.str();
  std::ifstream csv(dir / "trace.csv");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header.rfind("beta,residual_norm,I,", 0), 0u);
  const auto report = read_report(dir);
  EXPECT_EQ(report["rows"], 4);
  EXPECT_TRUE(report["apriori"]["all_within"].get<bool>());
}

TEST(Run, SolverFailureExitCode) {
  const auto dir = scratch("fail");
  PenalizedProblem<> p{6, 1e-3, 1, make_nonlinearity(default_cubic_spec())};
  write_field(dir / "forcing.json", residual(p, 0.5 * random_field(3, 6, SubspaceTag::All, 0.2)));
  auto cfg = cli::parse_config(R"({"M": 6, "beta": 0.001, "newton": {"max_iter": 1}})", "solve");
  cfg.forcing = (dir / "forcing.json").string();
  cfg.out_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(cfg, log), cli::kSolverFailure);
  const auto report = read_report(dir);
  EXPECT_EQ(report["failure"]["code"], "NoConvergence");
  EXPECT_TRUE(fs::exists(dir / "best.json"));
}

TEST(Run, MissingFieldFileIsConfigError) {
  const auto dir = scratch("missing");
  auto cfg = cli::parse_config(R"({"norms": {"field": "/nonexistent/u.json"}})", "norms");
  cfg.out_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(cfg, log), cli::kConfigError);
  EXPECT_EQ(read_report(dir)["failure"]["code"], "Io");
}

TEST(Run, NormsOnFieldFile) {
  const auto dir = scratch("norms");
  write_field(dir / "u.json", wt_test::cosine(6, 1, 3));
  auto cfg = cli::parse_config(R"({"norms": {"field": "x"}})", "norms");
  cfg.norms.field = (dir / "u.json").string();
  cfg.out_dir = dir.string();
  std::ostringstream log;
  EXPECT_EQ(cli::run(cfg, log), cli::kOk) << log.str();
  const auto report = read_report(dir);
  EXPECT_EQ(report["norms"][0]["name"], "E");
  EXPECT_NEAR(report["norms"][0]["value"].get<double>(), std::sqrt(5.0) * kPi / 2, 1e-12);
}
