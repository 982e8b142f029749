/* Copyright 2026 The gravitation Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include <gravitation/gravitation.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace gravitation {
namespace {

struct Result {
  int code = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is discarded unless the caller redirects it.
Result run_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " '" + std::string(GRAVITATION_CLI) + "' " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int status = ::pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

class CliTest : public ::testing::Test {
protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           (std::string("gravitation_cli_") + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

std::vector<std::vector<double>> parse_csv(const std::string& text, std::string* header = nullptr) {
  std::istringstream is(text);
  std::string line;
  std::getline(is, line);
  if (header) *header = line;
  std::vector<std::vector<double>> rows;
  while (std::getline(is, line)) {
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

std::vector<double> probability_column(const std::string& csv) {
  std::vector<double> p;
  for (const auto& r : parse_csv(csv)) p.push_back(r.at(1));
  return p;
}

double tv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return 0.5 * s;
}

TEST_F(CliTest, KernelIsStochastic) {
  const auto r = run_cli("kernel --n 10 --temperature 1");
  ASSERT_EQ(r.code, 0);
  std::string header;
  const auto rows = parse_csv(r.out, &header);
  EXPECT_EQ(header.rfind("from\\to,0,1,", 0), 0u);
  ASSERT_EQ(rows.size(), 11u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ASSERT_EQ(rows[i].size(), 12u);
    EXPECT_EQ(rows[i][0], static_cast<double>(i));
    double s = 0.0;
    for (std::size_t j = 1; j < rows[i].size(); ++j) {
      EXPECT_GE(rows[i][j], 0.0);
      s += rows[i][j];
    }
    EXPECT_NEAR(s, 1.0, 1e-12);
  }
}

TEST_F(CliTest, ValidationErrorsExitTwo) {
  EXPECT_EQ(run_cli("kernel --temperature 0").code, 2);
  EXPECT_EQ(run_cli("kernel --temperature -1").code, 2);
  EXPECT_EQ(run_cli("kernel --n 1").code, 2);
  EXPECT_EQ(run_cli("kernel --payoff-short 0 --payoff-long 1").code, 2);
  EXPECT_EQ(run_cli("kernel --half-rule middle").code, 2);
  EXPECT_EQ(run_cli("stationary --method qr").code, 2);
  EXPECT_EQ(run_cli("kernel --bogus").code, 2);
  EXPECT_EQ(run_cli("").code, 2);
  EXPECT_EQ(run_cli("simulate --periods 10 --burn-in 100 --out " + path("t.csv")).code, 2);
  EXPECT_EQ(run_cli("simulate --initial 500 --n 100 --out " + path("t.csv")).code, 2);
  EXPECT_EQ(run_cli("sweep --temperatures 2,1 --out-dir " + path("s")).code, 2);
  EXPECT_EQ(run_cli("sweep --outputs variance --out-dir " + path("s")).code, 2);
}

TEST_F(CliTest, IoErrorsExitOne) {
  EXPECT_EQ(run_cli("kernel --out /nonexistent/dir/k.csv").code, 1);
  EXPECT_EQ(run_cli("stationary --config /nonexistent/config.json").code, 1);
  const std::string blocker = path("blocker");
  write_text_file(blocker, "x");
  EXPECT_EQ(run_cli("figures --out-dir " + blocker + "/figs").code, 1);
  EXPECT_EQ(run_cli("sweep --temperatures 1 --out-dir " + blocker + "/s").code, 1);
}

TEST_F(CliTest, NumericalFailureExitsThree) {
  EXPECT_EQ(run_cli("stationary --method power --max-iters 2 --temperature 0.1").code, 3);
}

TEST_F(CliTest, HelpExitsZero) {
  EXPECT_EQ(run_cli("--help").code, 0);
  for (const char* sub : {"kernel", "stationary", "simulate", "sweep", "inequality", "figures"}) {
    const auto r = run_cli(std::string(sub) + " --help");
    EXPECT_EQ(r.code, 0) << sub;
    EXPECT_NE(r.out.find("--config"), std::string::npos) << sub;
  }
}

TEST_F(CliTest, StationarySolversAgree) {
  const auto analytic = probability_column(run_cli("stationary --n 100 --temperature 1 --method analytic").out);
  const auto power = probability_column(run_cli("stationary --n 100 --temperature 1 --method power").out);
  const auto eigen = probability_column(run_cli("stationary --n 100 --temperature 1 --method eigen").out);
  ASSERT_EQ(analytic.size(), 101u);
  ASSERT_EQ(power.size(), 101u);
  ASSERT_EQ(eigen.size(), 101u);
  EXPECT_LE(tv(analytic, power), 1e-8);
  EXPECT_LE(tv(analytic, eigen), 1e-8);
  double s = 0.0;
  for (double p : analytic) s += p;
  EXPECT_NEAR(s, 1.0, 1e-12);
}

TEST_F(CliTest, HighTemperatureApproachesBinomialHalf) {
  const auto p = probability_column(run_cli("stationary --n 100 --temperature 1e6 --method eigen").out);
  ASSERT_EQ(p.size(), 101u);
  std::vector<double> b(101);
  for (int k = 0; k <= 100; ++k) b[k] = binomial_pmf(100, k, 0.5);
  EXPECT_LE(tv(p, b), 1e-5);
}

TEST_F(CliTest, StationaryWritesSummaryBesideCsv) {
  const auto r = run_cli("stationary --n 20 --temperature 2 --out " + path("pi.csv"));
  ASSERT_EQ(r.code, 0);
  const auto stdout_summary = json::parse(r.out);
  const auto file_summary = json::parse(read_text_file(path("pi.json")));
  EXPECT_EQ(stdout_summary, file_summary);
  EXPECT_EQ(file_summary.at("n_producers"), 20);
  EXPECT_NEAR(file_summary.at("mean_corn_fraction").get<double>(), 0.5, 1e-12);
  EXPECT_LT(file_summary.at("residual").get<double>(), 1e-12);
}

TEST_F(CliTest, SimulateIsDeterministicAndAccurate) {
  const std::string args = "simulate --n 100 --temperature 1 --periods 200000 --burn-in 1000 --seed 7 --out ";
  const auto a = run_cli(args + path("a.csv"));
  const auto b = run_cli(args + path("b.csv"));
  ASSERT_EQ(a.code, 0);
  ASSERT_EQ(b.code, 0);
  EXPECT_EQ(read_text_file(path("a.csv")), read_text_file(path("b.csv")));
  EXPECT_EQ(a.out, b.out);
  const auto report = json::parse(a.out);
  EXPECT_LE(report.at("tv_to_exact").get<double>(), 0.02);
  EXPECT_EQ(report.at("seed"), 7);

  const auto meta = json::parse(read_text_file(path("a.json")));
  EXPECT_EQ(meta.at("seed"), 7);
  EXPECT_EQ(meta.at("burn_in"), 1000);
  EXPECT_EQ(meta.at("periods"), 200000);

  std::string header;
  const auto rows = parse_csv(read_text_file(path("a.csv")), &header);
  EXPECT_EQ(header, "period,corn_count");
  EXPECT_EQ(rows.size(), 200000u);
  EXPECT_EQ(rows.front()[1], 50.0);

  const auto c = run_cli("simulate --n 100 --temperature 1 --periods 200000 --seed 8 --out " + path("c.csv"));
  EXPECT_NE(read_text_file(path("a.csv")), read_text_file(path("c.csv")));
}

TEST_F(CliTest, SimulateProducerModeAgrees) {
  const auto r = run_cli("simulate --n 30 --temperature 1 --periods 100000 --mode producers --out " + path("p.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_LE(json::parse(r.out).at("tv_to_exact").get<double>(), 0.03);
}

TEST_F(CliTest, ShortSimulationCapsDefaultBurnIn) {
  const auto r = run_cli("simulate --n 10 --periods 50 --out " + path("s.csv"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(json::parse(r.out).at("burn_in"), 49);
}

TEST_F(CliTest, ConfigFileAndOverrides) {
  write_text_file(path("cfg.json"), R"({"n": 6, "temperature": 0.5, "half_rule": "low"})");
  const auto from_file = run_cli("kernel --config " + path("cfg.json"));
  ASSERT_EQ(from_file.code, 0);
  EXPECT_EQ(parse_csv(from_file.out).size(), 7u);

  std::ostringstream expected;
  write_kernel_csv(expected, build_kernel(ModelParams{6, 0.5, 1.0, 0.0}, HalfRule::Low));
  EXPECT_EQ(from_file.out, expected.str());

  const auto overridden = run_cli("kernel --config " + path("cfg.json") + " --n 9");
  ASSERT_EQ(overridden.code, 0);
  EXPECT_EQ(parse_csv(overridden.out).size(), 10u);

  write_text_file(path("alias.json"), R"({"n_producers": 4})");
  EXPECT_EQ(parse_csv(run_cli("kernel --config " + path("alias.json")).out).size(), 5u);

  write_text_file(path("bad.json"), R"({"n": 6, "colour": "red"})");
  EXPECT_EQ(run_cli("kernel --config " + path("bad.json")).code, 2);
  write_text_file(path("type.json"), R"({"n": "six"})");
  EXPECT_EQ(run_cli("kernel --config " + path("type.json")).code, 2);
  write_text_file(path("broken.json"), "{");
  EXPECT_EQ(run_cli("kernel --config " + path("broken.json")).code, 2);
}

TEST_F(CliTest, SweepWritesManifest) {
  const auto r = run_cli("sweep --n 40 --temperatures 0.5,1,2 --outputs mean,gini --threads 2 --out-dir " +
                         path("sw"));
  ASSERT_EQ(r.code, 0);
  const auto m = json::parse(read_text_file(path("sw/manifest.json")));
  EXPECT_EQ(m.at("artifacts").size(), 2u);
  EXPECT_TRUE(verify_manifest(path("sw")).empty());
  const auto rows = parse_csv(read_text_file(path("sw/mean.csv")));
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& row : rows) EXPECT_NEAR(row[1], 0.5, 1e-9);
}

TEST_F(CliTest, SweepLogGridFromConfig) {
  write_text_file(path("cfg.json"), R"({"n": 20, "t_min": 0.1, "t_max": 10, "t_count": 5, "outputs": ["mean"]})");
  const auto r = run_cli("sweep --config " + path("cfg.json") + " --out-dir " + path("sw"));
  ASSERT_EQ(r.code, 0);
  const auto rows = parse_csv(read_text_file(path("sw/mean.csv")));
  ASSERT_EQ(rows.size(), 5u);
  EXPECT_DOUBLE_EQ(rows.front()[0], 0.1);
  EXPECT_DOUBLE_EQ(rows.back()[0], 10.0);
}

TEST_F(CliTest, ThreadsFromEnvironmentDoNotChangeOutput) {
  const std::string args = "sweep --n 30 --t-count 6 --outputs stationary,mean --out-dir ";
  ASSERT_EQ(run_cli(args + path("one"), "GRAVITATION_THREADS=1").code, 0);
  ASSERT_EQ(run_cli(args + path("four"), "GRAVITATION_THREADS=4").code, 0);
  EXPECT_EQ(read_text_file(path("one/manifest.json")), read_text_file(path("four/manifest.json")));
}

TEST_F(CliTest, Inequality) {
  const auto r = run_cli("inequality --n 100 --temperature 10 --lorenz-out " + path("lorenz.csv"));
  ASSERT_EQ(r.code, 0);
  const auto s = json::parse(r.out);
  EXPECT_GE(s.at("gini").get<double>(), 0.0);
  EXPECT_LE(s.at("gini").get<double>(), 1.0);
  EXPECT_NEAR(s.at("gini").get<double>(), 1.0 - s.at("p_win").get<double>(), 1e-12);
  std::string header;
  const auto rows = parse_csv(read_text_file(path("lorenz.csv")), &header);
  EXPECT_EQ(header, "cum_population,cum_income");
  EXPECT_EQ(rows.front()[0], 0.0);
  EXPECT_EQ(rows.back()[0], 1.0);
  EXPECT_EQ(rows.back()[1], 1.0);

  EXPECT_EQ(run_cli("inequality --payoff-short=0 --payoff-long=-1").code, 2);
}

TEST_F(CliTest, FiguresAreReproducible) {
  ASSERT_EQ(run_cli("figures --threads 4 --out-dir " + path("a")).code, 0);
  ASSERT_EQ(run_cli("figures --threads 1 --out-dir " + path("b")).code, 0);
  EXPECT_EQ(read_text_file(path("a/manifest.json")), read_text_file(path("b/manifest.json")));
  EXPECT_TRUE(verify_manifest(path("a")).empty());
  for (const char* f : {"staffing.svg", "ergodic.svg", "lorenz.svg"}) EXPECT_TRUE(fs::exists(path("a") + "/" + f));
}

}  // namespace
}  // namespace gravitation
