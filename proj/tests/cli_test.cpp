// Copyright 2026 The wiks authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Black-box tests of the command-line binary. The test runner exports the
// binary path as WIKS_CLI_BIN; commands run through the shell with stdout
// and stderr captured to files.

#include <cstdlib>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include <wiks/calibration.hpp>
#include <wiks/io.hpp>
#include <wiks/wiks.hpp>

namespace {

namespace fs = std::filesystem;
using namespace wiks;

std::string cli_binary() {
  const char* bin = std::getenv("WIKS_CLI_BIN");
  REQUIRE_MESSAGE(bin != nullptr, "WIKS_CLI_BIN must point at the CLI binary");
  return bin;
}

struct TempDir {
  fs::path path;
  TempDir() {
    std::string tmpl = (fs::temp_directory_path() / "wiks_cli_XXXXXX").string();
    REQUIRE(mkdtemp(tmpl.data()) != nullptr);
    path = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  fs::path file(const std::string& name) const { return path / name; }
};

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

// Runs `args` under the shell from inside `dir`, so relative output paths
// land in the temp dir. `env_prefix` may carry VAR=value assignments.
RunResult run_cli(const TempDir& dir, const std::string& args,
                  const std::string& env_prefix = "") {
  const fs::path out = dir.file("stdout.txt");
  const fs::path err = dir.file("stderr.txt");
  const std::string cmd = "cd " + dir.path.string() + " && " + env_prefix + cli_binary() + " " +
                          args + " > " + out.string() + " 2> " + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = read_text_file(out);
  r.err = read_text_file(err);
  return r;
}

std::string csv_univariate(const std::vector<double>& values) {
  std::string text;
  for (double v : values) text += nlohmann::json(v).dump() + "\n";
  return text;
}

std::string csv_bivariate(const std::vector<Point2>& values) {
  std::string text;
  for (const auto& p : values) {
    text += nlohmann::json(p.x).dump() + "," + nlohmann::json(p.y).dump() + "\n";
  }
  return text;
}

const std::vector<double> kLeft{0.12, -0.44, 1.21, 0.33, -0.91, 0.52,
                                -1.12, 0.21, 0.74, -0.35, 0.05, -0.62};
const std::vector<double> kRight{2.11, 1.43, 3.24, 2.32, 0.93, 1.52,
                                 1.14, 2.25, 2.71, 1.33, 1.95, 2.48};

}  // namespace

TEST_CASE("cli: help exits zero and names the subcommands") {
  TempDir dir;
  const auto r = run_cli(dir, "--help");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("test") != std::string::npos);
  CHECK(r.out.find("calibrate") != std::string::npos);
  CHECK(r.out.find("power") != std::string::npos);
}

TEST_CASE("cli: test with a supplied threshold matches the library exactly") {
  TempDir dir;
  write_text_file(dir.file("x.csv"), csv_univariate(kLeft));
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));

  const auto r = run_cli(dir, "test --x x.csv --y y.csv --threshold 0.6 --s-draws 80 --seed 5");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("reject H0") != std::string::npos);
  CHECK(r.out.find("report written to report.json") != std::string::npos);

  const auto report =
      pair_test_report_from_json(nlohmann::json::parse(read_text_file(dir.file("report.json"))));
  CHECK(report.n == kLeft.size());
  CHECK(report.m == kRight.size());
  CHECK(report.dimension == 1);
  CHECK(report.threshold == 0.6);
  CHECK(report.threshold_source == "supplied");
  CHECK(report.reject_null);
  CHECK(report.weight == "power_complement(4)");
  REQUIRE(report.ks.has_value());
  REQUIRE(report.wilcoxon.has_value());

  // The binary must reproduce the library estimate bit for bit: the estimate
  // stream is sub(1) of the master seed.
  const DpPrior prior{1.0, UnivariateModel{Normal{0, 1}}};
  const auto expected = wiks::wiks(kLeft, kRight, prior,
                                   WeightSpec{PowerComplementWeight{4.0}}, 80, SeedSpec{5, 0}.sub(1));
  CHECK(report.estimate == expected);
  CHECK(*report.ks == classical_ks_test(kLeft, kRight));
  CHECK(*report.wilcoxon == wilcoxon_test(kLeft, kRight));
}

TEST_CASE("cli: reports are byte-identical across runs and worker counts") {
  TempDir dir;
  write_text_file(dir.file("x.csv"), csv_univariate(kLeft));
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));

  const std::string base = "test --x x.csv --y y.csv --threshold 0.6 --s-draws 60 --seed 42";
  CHECK(run_cli(dir, base + " --out a.json").exit_code == 0);
  CHECK(run_cli(dir, base + " --workers 4 --out b.json").exit_code == 0);
  CHECK(read_text_file(dir.file("a.json")) == read_text_file(dir.file("b.json")));
}

TEST_CASE("cli: test calibrates a threshold when none is supplied") {
  TempDir dir;
  write_text_file(dir.file("x.csv"), csv_univariate(kLeft));
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));

  const auto r = run_cli(dir,
                         "test --x x.csv --y y.csv --s-draws 40 --replicates 30 --seed 9 "
                         "--out cal_report.json");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("calibrating threshold (30 replicates)") != std::string::npos);

  const auto report = pair_test_report_from_json(
      nlohmann::json::parse(read_text_file(dir.file("cal_report.json"))));
  CHECK(report.threshold_source == "calibrated");
  CHECK(report.threshold > 0);
  CHECK(report.threshold < 1);

  // Calibration runs on stream sub(2) with the data's own sample sizes.
  CalibrationConfig cfg;
  cfg.n = kLeft.size();
  cfg.m = kRight.size();
  cfg.replicates = 30;
  cfg.alpha = 0.05;
  cfg.null_model = UnivariateModel{Normal{0, 1}};
  const DpPrior prior{1.0, UnivariateModel{Normal{0, 1}}};
  const auto expected = calibrate_wiks_null(cfg, prior, WeightSpec{PowerComplementWeight{4.0}},
                                            40, SeedSpec{9, 0}.sub(2));
  CHECK(report.threshold == expected.threshold);
}

TEST_CASE("cli: bivariate test omits the univariate baselines") {
  TempDir dir;
  const std::vector<Point2> bx{{0.1, 0.2}, {-0.4, 0.5}, {1.2, -0.3}, {0.3, 0.8}, {-0.9, 0.1},
                               {0.5, -0.6}, {-1.1, 0.4}, {0.2, 0.9}, {0.7, -0.2}, {-0.3, 0.6}};
  const std::vector<Point2> by{{1.1, 1.2}, {0.6, 1.5}, {2.2, 0.7}, {1.3, 1.8}, {0.1, 1.1},
                               {1.5, 0.4}, {-0.1, 1.4}, {1.2, 1.9}, {1.7, 0.8}, {0.7, 1.6}};
  write_text_file(dir.file("x.csv"), csv_bivariate(bx));
  write_text_file(dir.file("y.csv"), csv_bivariate(by));

  const auto r = run_cli(dir,
                         "test --x x.csv --y y.csv --threshold 0.5 --s-draws 50 --seed 3 "
                         "--base-y 'normal(0,2)'");
  CHECK(r.exit_code == 0);

  const auto report =
      pair_test_report_from_json(nlohmann::json::parse(read_text_file(dir.file("report.json"))));
  CHECK(report.dimension == 2);
  CHECK_FALSE(report.ks.has_value());
  CHECK_FALSE(report.wilcoxon.has_value());
  REQUIRE(report.base_models.size() == 2);
  CHECK(report.base_models[0] == "normal(0,1)");
  CHECK(report.base_models[1] == "normal(0,2)");

  const BivariateDpPrior prior{1.0, UnivariateModel{Normal{0, 1}}, UnivariateModel{Normal{0, 2}}};
  const auto expected =
      wiks::wiks(bx, by, prior, WeightSpec{PowerComplementWeight{4.0}}, 50, SeedSpec{3, 0}.sub(1));
  CHECK(report.estimate == expected);
}

TEST_CASE("cli: unreadable or malformed inputs exit 2") {
  TempDir dir;
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));

  auto missing = run_cli(dir, "test --x ghost.csv --y y.csv --threshold 0.5");
  CHECK(missing.exit_code == 2);
  CHECK(missing.err.find("ghost.csv") != std::string::npos);

  write_text_file(dir.file("bad.csv"), "0.5\n1.25\noops\n");
  auto malformed = run_cli(dir, "test --x bad.csv --y y.csv --threshold 0.5");
  CHECK(malformed.exit_code == 2);
  CHECK(malformed.err.find("line 3") != std::string::npos);
}

TEST_CASE("cli: usage errors exit 64") {
  TempDir dir;
  write_text_file(dir.file("x.csv"), csv_univariate(kLeft));
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));
  write_text_file(dir.file("b.csv"), "0.1,0.2\n0.3,0.4\n");

  CHECK(run_cli(dir, "test --x x.csv --y y.csv --no-such-flag").exit_code == 64);
  CHECK(run_cli(dir, "test --x x.csv --y y.csv --base 'normal(0,-1)'").exit_code == 64);
  CHECK(run_cli(dir, "test --x x.csv --y y.csv --threshold 1.5").exit_code == 64);
  CHECK(run_cli(dir, "test --x x.csv --y b.csv --threshold 0.5").exit_code == 64);
  CHECK(run_cli(dir, "test --x x.csv --y y.csv --threshold 0.5 --base-y 'normal(0,2)'")
            .exit_code == 64);
  CHECK(run_cli(dir, "calibrate --mode z_quantile --null 'binormal(0,0,1,0,1)'").exit_code == 64);
  CHECK(run_cli(dir, "power --scenario 77 --replicates 2 --s-draws 5 --cal-replicates 5")
            .exit_code == 64);
}

TEST_CASE("cli: draw-pair budget exits 3, malformed budget exits 64") {
  TempDir dir;
  auto over = run_cli(dir, "calibrate --replicates 50 --s-draws 50", "WIKS_MAX_BUDGET=100 ");
  CHECK(over.exit_code == 3);
  CHECK(over.err.find("WIKS_MAX_BUDGET") != std::string::npos);

  auto junk = run_cli(dir, "calibrate --replicates 5 --s-draws 5", "WIKS_MAX_BUDGET=junk ");
  CHECK(junk.exit_code == 64);
}

TEST_CASE("cli: calibrate writes an auditable result file") {
  TempDir dir;
  const auto r = run_cli(dir, "calibrate --mode z_quantile --n 30 --m 40 --replicates 400 "
                              "--k 0.5 --seed 11");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("calibration written to calibration.json") != std::string::npos);

  const auto result = calibration_result_from_json(
      nlohmann::json::parse(read_text_file(dir.file("calibration.json"))));
  CHECK(result.mode == CalibrationMode::z_quantile);
  CHECK(result.config.n == 30);
  CHECK(result.config.m == 40);
  CHECK(result.replicate_values.size() == 400);
  CHECK(result.threshold == empirical_upper_quantile(result.replicate_values, 0.05));

  CalibrationConfig cfg;
  cfg.n = 30;
  cfg.m = 40;
  cfg.replicates = 400;
  const auto expected = calibrate_z_quantile(cfg, 0.5, SeedSpec{11, 0}.sub(2));
  CHECK(result.threshold == expected.threshold);
}

TEST_CASE("cli: calibrate in index mode accepts a bivariate null") {
  TempDir dir;
  const auto r = run_cli(dir, "calibrate --null 'binormal(0,0,1,0,1)' --n 8 --m 8 "
                              "--replicates 12 --s-draws 15 --seed 2 --out bical.json");
  CHECK(r.exit_code == 0);
  const auto result =
      calibration_result_from_json(nlohmann::json::parse(read_text_file(dir.file("bical.json"))));
  CHECK(result.mode == CalibrationMode::wiks_null_sim);
  CHECK(result.replicate_values.size() == 12);
  CHECK(std::holds_alternative<BivariateModel>(result.config.null_model));
}

TEST_CASE("cli: power writes the csv schema and respects the method list") {
  TempDir dir;
  const auto r = run_cli(dir,
                         "power --scenario 1 --theta 0 --theta 2 --replicates 10 --s-draws 20 "
                         "--cal-replicates 20 --seed 4");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("calibrating univariate threshold") != std::string::npos);
  CHECK(r.out.find("table written to power.csv") != std::string::npos);

  const auto table = power_table_from_csv(read_text_file(dir.file("power.csv")));
  REQUIRE(table.rows.size() == 6);  // 2 thetas x 3 methods
  for (const auto& row : table.rows) {
    CHECK(row.scenario_id == 1);
    CHECK(row.power >= 0);
    CHECK(row.power <= 1);
    CHECK(row.replicates == 10);
  }

  // Baselines only: no index threshold is needed, so nothing calibrates.
  const auto r2 = run_cli(dir,
                          "power --scenario 1 --theta 0 --theta 2 --methods ks wilcoxon "
                          "--replicates 10 --seed 4 --out base.csv");
  CHECK(r2.exit_code == 0);
  CHECK(r2.err.find("calibrating") == std::string::npos);
  CHECK(power_table_from_csv(read_text_file(dir.file("base.csv"))).rows.size() == 4);
}

TEST_CASE("cli: calibrate emits byte-identical files for the same seed") {
  TempDir dir;
  const std::string cmd = "calibrate --n 10 --m 10 --replicates 8 --s-draws 12 --seed 6";
  CHECK(run_cli(dir, cmd + " --out c1.json").exit_code == 0);
  CHECK(run_cli(dir, cmd + " --out c2.json").exit_code == 0);
  CHECK(read_text_file(dir.file("c1.json")) == read_text_file(dir.file("c2.json")));
}

TEST_CASE("cli: power output does not depend on the worker count") {
  TempDir dir;
  const std::string cmd =
      "power --scenario 1 --theta 0.5 --replicates 6 --s-draws 10 --cal-replicates 8 --seed 13";
  CHECK(run_cli(dir, cmd + " --out p1.csv").exit_code == 0);
  CHECK(run_cli(dir, cmd + " --workers 4 --out p2.csv").exit_code == 0);
  CHECK(read_text_file(dir.file("p1.csv")) == read_text_file(dir.file("p2.csv")));
}

TEST_CASE("cli: off-grid theta values warn on stderr") {
  TempDir dir;
  const auto r = run_cli(dir,
                         "power --scenario 1 --theta 9.5 --methods ks --replicates 2 --seed 1");
  CHECK(r.exit_code == 0);
  CHECK(r.err.find("outside the standard grid") != std::string::npos);
}

TEST_CASE("cli: config files supply defaults that flags override") {
  TempDir dir;
  write_text_file(dir.file("x.csv"), csv_univariate(kLeft));
  write_text_file(dir.file("y.csv"), csv_univariate(kRight));
  write_text_file(dir.file("cfg.ini"), "[test]\ns-draws=33\nseed=21\n");

  const std::string base = "test --x x.csv --y y.csv --threshold 0.5 --config cfg.ini";
  CHECK(run_cli(dir, base).exit_code == 0);
  auto report =
      pair_test_report_from_json(nlohmann::json::parse(read_text_file(dir.file("report.json"))));
  CHECK(report.s_draws == 33);
  CHECK(report.seed == SeedSpec{21, 0});

  CHECK(run_cli(dir, base + " --s-draws 44").exit_code == 0);
  report =
      pair_test_report_from_json(nlohmann::json::parse(read_text_file(dir.file("report.json"))));
  CHECK(report.s_draws == 44);
  CHECK(report.seed == SeedSpec{21, 0});
}
