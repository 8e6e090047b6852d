#include <filesystem>
#include <fstream>

#include "col/config.hpp"
#include "col/csv.hpp"
#include "col/experiment.hpp"
#include "col/verify.hpp"
#include "doctest.h"

using namespace col;
namespace fs = std::filesystem;

namespace {

const char* kQ0Config = R"(
# canonical quadratic fixture
[problem]
type = quadratic
a = identity-scale
a_scale = 0.5
alpha = 1
[set]
kind = box
lower = -1 -1
upper = 1 1
[algorithm]
name = ogd
[oracle]
mode = gaussian
sigma = 0.25
[run]
rounds = 30
seeds = 0 1
x1 = 1 1
[output]
dir = out
)";

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("config parsing") {
  const KeyValues kv = parse_config_text(kQ0Config, "inline");
  CHECK(kv.at("problem.type") == "quadratic");
  CHECK(kv.at("run.seeds") == "0 1");

  SUBCASE("typed conversion") {
    const ExperimentConfig cfg = config_from_keyvalues(kv);
    CHECK(cfg.rounds == 30);
    CHECK(cfg.seeds == std::vector<uint64_t>{0, 1});
    CHECK(cfg.sigma == 0.25);
    CHECK(cfg.oracle_mode == FeedbackMode::Gaussian);
    REQUIRE(cfg.x1.has_value());
    CHECK((*cfg.x1)[0] == 1.0);
  }
  SUBCASE("overrides win over file values") {
    KeyValues copy = kv;
    apply_overrides(copy, {"run.rounds=7", "oracle.sigma=0"});
    const ExperimentConfig cfg = config_from_keyvalues(copy);
    CHECK(cfg.rounds == 7);
    CHECK(cfg.sigma == 0.0);
  }
  SUBCASE("unknown keys are rejected") {
    KeyValues copy = kv;
    copy["run.roundz"] = "5";
    CHECK_THROWS_AS(config_from_keyvalues(copy), ConfigError);
  }
  SUBCASE("syntax errors carry the line") {
    CHECK_THROWS_AS(parse_config_text("[run\nrounds = 3\n", "bad"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("rounds = 3\n", "bad"), ConfigError);
  }
  SUBCASE("malformed overrides are rejected") {
    KeyValues copy = kv;
    CHECK_THROWS_AS(apply_overrides(copy, {"rounds=3"}), ConfigError);
    CHECK_THROWS_AS(apply_overrides(copy, {"run.rounds"}), ConfigError);
  }
}

TEST_CASE("build_problem from config") {
  KeyValues kv = parse_config_text(kQ0Config, "inline");
  SUBCASE("identity-scale quadratic") {
    const COLProblem p = build_problem(config_from_keyvalues(kv));
    CHECK(p.beta == doctest::Approx(0.5).epsilon(1e-10));
    CHECK(p.set.dimension() == 2);
  }
  SUBCASE("explicit rows use '/' as the row separator") {
    kv["problem.a"] = "rows";
    kv["problem.a_rows"] = "0 0.5 / 0.5 0";
    const COLProblem p = build_problem(config_from_keyvalues(kv));
    CHECK(p.beta == doctest::Approx(0.5).epsilon(1e-10));
  }
  SUBCASE("diagonal matrices") {
    kv["problem.a"] = "diagonal";
    kv["problem.a_diag"] = "0.9 0.1";
    const COLProblem p = build_problem(config_from_keyvalues(kv));
    CHECK(p.beta == doctest::Approx(0.9).epsilon(1e-10));
  }
  SUBCASE("dimension mismatches become config errors") {
    kv["problem.b"] = "1 2 3";
    CHECK_THROWS_AS(build_problem(config_from_keyvalues(kv)), ConfigError);
  }
}

TEST_CASE("float formatting round trips") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 123456.789012345678,
                   5e-324}) {
    CHECK(parse_double(format_double(v)) == v);
  }
  CHECK_THROWS_AS(parse_double("abc"), ConfigError);
  CHECK_THROWS_AS(parse_double("1.5x"), ConfigError);
}

TEST_CASE("atomic file writes") {
  TempDir tmp("col_atomic_test");
  const fs::path p = tmp.path / "x.csv";
  atomic_write_file(p, "a,b\n1,2\n");
  atomic_write_file(p, "a,b\n3,4\n");
  std::ifstream in(p);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all == "a,b\n3,4\n");
  CHECK(fs::directory_iterator(tmp.path) != fs::directory_iterator());
}

TEST_CASE("run_experiment") {
  KeyValues kv = parse_config_text(kQ0Config, "inline");

  SUBCASE("single round produces one data row") {
    TempDir tmp("col_exp_one");
    kv["run.rounds"] = "1";
    kv["run.seeds"] = "0";
    ExperimentConfig cfg = config_from_keyvalues(kv);
    cfg.out_dir = tmp.path.string();
    const ExperimentOutcome out = run_experiment(cfg, true);
    const RoundsCsv csv = read_rounds_csv(out.per_seed[0].rounds_csv);
    CHECK(csv.rows.size() == 1);
    CHECK(csv.header.size() == 8);
    CHECK(csv.header[0] == "round");
  }
  SUBCASE("same config and seed produce byte-identical files") {
    TempDir tmp("col_exp_det");
    ExperimentConfig cfg = config_from_keyvalues(kv);
    std::string bytes[2];
    for (int r = 0; r < 2; ++r) {
      cfg.out_dir = (tmp.path / std::to_string(r)).string();
      const ExperimentOutcome out = run_experiment(cfg, true);
      std::ifstream in(out.per_seed[1].rounds_csv, std::ios::binary);
      bytes[r].assign((std::istreambuf_iterator<char>(in)),
                      std::istreambuf_iterator<char>());
    }
    CHECK(bytes[0] == bytes[1]);
  }
  SUBCASE("summary has one row per seed plus the mean") {
    TempDir tmp("col_exp_sum");
    ExperimentConfig cfg = config_from_keyvalues(kv);
    cfg.out_dir = tmp.path.string();
    const ExperimentOutcome out = run_experiment(cfg, true);
    const std::string summary = summary_csv_content(out);
    CHECK(std::count(summary.begin(), summary.end(), '\n') == 4);  // header + 2 seeds + mean
    CHECK(summary.find("mean,") != std::string::npos);
  }
  SUBCASE("x1 outside the set is a config error") {
    kv["run.x1"] = "5 5";
    CHECK_THROWS_AS(run_experiment(config_from_keyvalues(kv), false), ConfigError);
  }
  SUBCASE("bounds can be disabled") {
    kv["run.bounds"] = "off";
    ExperimentConfig cfg = config_from_keyvalues(kv);
    const ExperimentOutcome out = run_experiment(cfg, false);
    CHECK_FALSE(out.equilibrium.has_value());
    CHECK_FALSE(out.per_seed[0].report.has_comparator);
  }
  SUBCASE("seed-level parallelism cap does not change results") {
    ExperimentConfig cfg = config_from_keyvalues(kv);
    cfg.seeds = {0, 1, 2, 3};
    std::string outputs[2];
    const char* caps[2] = {"1", "4"};
    for (int r = 0; r < 2; ++r) {
      setenv("COL_LAB_THREADS", caps[r], 1);
      const ExperimentOutcome out = run_experiment(cfg, false);
      std::string all;
      for (const auto& seed : out.per_seed) all += rounds_csv_content(seed.report);
      outputs[r] = all;
    }
    unsetenv("COL_LAB_THREADS");
    CHECK(outputs[0] == outputs[1]);
  }
}

TEST_CASE("verify scopes and negative controls") {
  SUBCASE("geometry suite passes on a fresh build") {
    const auto results = verify::run_checks("geometry");
    CHECK(results.size() >= 3);
    CHECK(verify::all_pass(results));
  }
  SUBCASE("unknown scope is a config error") {
    CHECK_THROWS_AS(verify::run_checks("bogus"), ConfigError);
  }
  SUBCASE("unknown fault fixture is a config error") {
    CHECK_THROWS_AS(verify::run_checks("regret", "bogus-fault"), ConfigError);
  }
  SUBCASE("corrupted delta series fails the certificate check") {
    const auto results = verify::run_checks("regret", "regret-delta");
    CHECK_FALSE(verify::all_pass(results));
  }
}
