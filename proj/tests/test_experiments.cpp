#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rootlaw/experiments.hpp"
#include "rootlaw/limits.hpp"

using namespace rootlaw;
namespace fs = std::filesystem;

namespace {

fs::path ScratchDir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rootlaw_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

struct CsvRow {
  int trial;
  double re, im, modulus, angle;
};

std::vector<CsvRow> ReadCsv(const fs::path& path) {
  std::ifstream in(path);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "trial,re,im,modulus,angle");
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    CsvRow row{};
    char comma;
    std::istringstream fields(line);
    fields >> row.trial >> comma >> row.re >> comma >> row.im >> comma >> row.modulus >> comma >> row.angle;
    rows.push_back(row);
  }
  return rows;
}

ExperimentConfig KacConfig(int n, int order, int trials) {
  ExperimentConfig config;
  config.ensemble = "kac";
  config.n = n;
  config.rule = {DerivativeRule::Kind::kExplicit, static_cast<double>(order)};
  config.trials = trials;
  config.seed = 12345;
  return config;
}

}  // namespace

TEST(DerivativeRule, Resolution) {
  using Kind = DerivativeRule::Kind;
  EXPECT_EQ((DerivativeRule{Kind::kExplicit, 7}).resolve(10), 7);
  EXPECT_EQ((DerivativeRule{Kind::kRatio, 0.5}).resolve(801), 400);
  EXPECT_EQ((DerivativeRule{Kind::kLogDegree, 0}).resolve(1000), 994);
  EXPECT_EQ((DerivativeRule{Kind::kFixedDegree, 100}).resolve(2000), 1900);
  EXPECT_THROW((DerivativeRule{Kind::kExplicit, 10}).resolve(10), std::invalid_argument);
  EXPECT_THROW((DerivativeRule{Kind::kFixedDegree, 0}).resolve(10), std::invalid_argument);
  EXPECT_THROW((DerivativeRule{Kind::kRatio, 1.0}).resolve(10), std::invalid_argument);
}

TEST(ParseTarget, KnownLabelsAndErrors) {
  EXPECT_NEAR(parse_target("kac-a:0.5").cdf(0.25), 1.0 / 3.0, 1e-15);
  EXPECT_EQ(parse_target("kac-rescaled").cdf(0.4), 0.4);
  EXPECT_NEAR(parse_target("elliptic-rescaled").cdf(1.0), (std::sqrt(5.0) - 1) / 2, 1e-15);
  EXPECT_EQ(parse_target("kac-unit-circle").cdf(1.0), 1.0);
  EXPECT_NEAR(parse_target("lf:kac:0.5").cdf(0.25), 1.0 / 3.0, 1e-3);
  EXPECT_NEAR(parse_target("lf:kac-case3-rescaled").cdf(0.5), 0.5, 1e-3);
  EXPECT_EQ(parse_target("lf:kac").cdf(1e9), 1.0);
  EXPECT_THROW(parse_target("bogus"), std::invalid_argument);
  EXPECT_THROW(parse_target("kac-a:1.5"), std::invalid_argument);
}

TEST(RunTrials, Bookkeeping) {
  const auto report = run_trials(KacConfig(200, 0, 3));
  EXPECT_EQ(report.pooled_root_count, 600u);
  EXPECT_EQ(report.failed_trials, 0);
  ASSERT_EQ(report.trials.size(), 3u);
  for (const auto& t : report.trials) EXPECT_EQ(t.roots.size(), 200u);
  EXPECT_TRUE(std::isnan(report.pooled_ks));
}

TEST(RunTrials, PooledKsInRange) {
  auto config = KacConfig(800, 400, 2);
  config.rule = {DerivativeRule::Kind::kRatio, 0.5};
  config.target = "kac-a:0.5";
  const auto report = run_trials(config);
  EXPECT_GE(report.pooled_ks, 0.0);
  EXPECT_LE(report.pooled_ks, 1.0);
  for (double ks : report.per_trial_ks()) EXPECT_TRUE(ks >= 0.0 && ks <= 1.0);
}

TEST(RunTrials, RejectsInvalidConfig) {
  auto config = KacConfig(100, 0, 0);
  EXPECT_THROW(run_trials(config), std::invalid_argument);
  config = KacConfig(100, 100, 1);
  EXPECT_THROW(run_trials(config), std::invalid_argument);
}

TEST(RunTrials, AutoRescaleUsesDegreeRatio) {
  auto config = KacConfig(400, 0, 1);
  config.rule = {DerivativeRule::Kind::kFixedDegree, 20};
  config.rescale = RescaleMode::kAuto;
  const auto report = run_trials(config);
  EXPECT_NEAR(report.log_rescale, std::log(20.0), 1e-14);
  EXPECT_EQ(report.derivative_degree, 20);
}

TEST(RunTrials, AnnulusFractionsAveraged) {
  auto config = KacConfig(300, 0, 2);
  config.annuli = {{0.0, 1e9}, {2.0, 1.0}};
  const auto report = run_trials(config);
  ASSERT_EQ(report.mean_annulus_fractions.size(), 2u);
  EXPECT_EQ(report.mean_annulus_fractions[0], 1.0);
  EXPECT_EQ(report.mean_annulus_fractions[1], 0.0);
}

TEST(RunTrials, IndependentOfThreadCount) {
  auto config = KacConfig(300, 100, 5);
  config.target = "kac-a:0.3333333333333333";
  const auto serial = run_trials(config);
  config.threads = 3;
  const auto parallel = run_trials(config);
  for (std::size_t i = 0; i < serial.trials.size(); ++i) {
    EXPECT_EQ(serial.trials[i].roots, parallel.trials[i].roots);
  }
  EXPECT_EQ(serial.pooled_ks, parallel.pooled_ks);
}

TEST(RunTrials, TrialsAreExchangeable) {
  auto config = KacConfig(150, 50, 4);
  config.target = "kac-a:0.3333333333333333";
  const auto report = run_trials(config);
  Report permuted = report;
  std::reverse(permuted.trials.begin(), permuted.trials.end());
  const auto f = radial_cdf(pooled_measure(report));
  const auto g = radial_cdf(pooled_measure(permuted));
  EXPECT_EQ(f.steps(), g.steps());
  EXPECT_EQ(ks_distance(f, parse_target(*config.target).cdf), report.pooled_ks);
  EXPECT_EQ(angular_discrepancy(pooled_measure(permuted)), report.angular_discrepancy);
}

TEST(RunTrials, FailedTrialsAreFlaggedAndExcluded) {
  auto config = KacConfig(200, 0, 3);
  config.root_options.max_iterations = 1;
  config.target = "kac-unit-circle";
  const auto report = run_trials(config);
  EXPECT_EQ(report.failed_trials, 3);
  EXPECT_EQ(report.pooled_root_count, 0u);
  EXPECT_TRUE(std::isnan(report.pooled_ks));
  for (const auto& t : report.trials) {
    EXPECT_TRUE(t.failed);
    EXPECT_FALSE(t.failure.empty());
  }
}

TEST(WriteReport, CsvShapeAndDeterminism) {
  const auto dir = ScratchDir("csv");
  auto config = KacConfig(3, 0, 2);
  const auto report = run_trials(config);
  write_report(report, {dir / "roots.csv", dir / "summary.json"});
  EXPECT_EQ(ReadCsv(dir / "roots.csv").size(), 6u);
  std::ifstream in(dir / "roots.csv");
  EXPECT_EQ(std::count(std::istreambuf_iterator<char>(in), {}, '\n'), 7);

  const auto second = run_trials(config);
  write_report(second, {dir / "again.csv", dir / "again.json"});
  EXPECT_EQ(Slurp(dir / "roots.csv"), Slurp(dir / "again.csv"));
}

TEST(WriteReport, JsonRoundTripAndPooledKsFromCsv) {
  const auto dir = ScratchDir("json");
  auto config = KacConfig(400, 200, 3);
  config.target = "kac-a:0.5";
  const auto report = run_trials(config);
  write_report(report, {dir / "roots.csv", dir / "summary.json"});

  const auto summary = nlohmann::json::parse(Slurp(dir / "summary.json"));
  for (const char* key : {"config", "pooled_ks", "per_trial_ks", "angular_discrepancy", "failed_trials",
                          "runtime_seconds"}) {
    EXPECT_TRUE(summary.contains(key)) << key;
  }
  EXPECT_EQ(summary["pooled_ks"].get<double>(), report.pooled_ks);
  EXPECT_EQ(summary["per_trial_ks"].size(), 3u);

  std::vector<double> moduli;
  for (const auto& row : ReadCsv(dir / "roots.csv")) moduli.push_back(row.modulus);
  std::sort(moduli.begin(), moduli.end());
  const double recomputed = ks_distance(RadialCDF::empirical(moduli), parse_target("kac-a:0.5").cdf);
  EXPECT_NEAR(recomputed, report.pooled_ks, 1e-15);
}

TEST(WriteReport, Errors) {
  Report empty;
  const auto dir = ScratchDir("err");
  EXPECT_THROW(write_report(empty, {dir / "a.csv", dir / "a.json"}), std::invalid_argument);
  const auto report = run_trials(KacConfig(5, 0, 1));
  try {
    write_report(report, {dir / "missing" / "a.csv", dir / "a.json"});
    FAIL() << "expected an I/O error";
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("missing"), std::string::npos);
  }
}

TEST(FormatDouble, SeventeenSignificantDigitsRoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) {
    const std::string s = format_double(v);
    EXPECT_EQ(std::stod(s), v);
  }
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

TEST(FixedDegree, LinearCaseIsExactForEveryN) {
  // The (n-1)-th derivative is proportional to 1/n + z, so the scaled root is
  // -1 for every n. What remains is rounding in log n! at n = 5000.
  const int ns[] = {50, 500, 5000};
  const std::complex<double> xi[] = {1.0, 1.0};
  const auto result = fixed_degree_convergence(EnsembleKind::kKac, 1, ns, xi);
  ASSERT_EQ(result.limit_roots.size(), 1u);
  EXPECT_LT(std::abs(result.limit_roots[0] + 1.0), 1e-15);
  for (double d : result.distances) EXPECT_LT(d, 1e-10);
}

TEST(FixedDegree, KacFiveShrinksWithN) {
  const int ns[] = {100, 1000};
  const auto result = fixed_degree_convergence(EnsembleKind::kKac, 5, ns, 7);
  EXPECT_LT(result.distances[1], result.distances[0]);
}

TEST(FixedDegree, EllipticQuadraticLimit) {
  const int ns[] = {200};
  const std::complex<double> xi[] = {1.0, 1.0, 1.0};
  const auto result = fixed_degree_convergence(EnsembleKind::kElliptic, 2, ns, xi);
  // Quadratic formula on z^2/2 + z + 1/sqrt 2.
  const std::complex<double> disc = std::sqrt(std::complex<double>(1.0 - 2.0 / std::sqrt(2.0)));
  const std::complex<double> expected[] = {-1.0 + disc, -1.0 - disc};
  EXPECT_LT(match_roots(result.limit_roots, expected).max_distance, 1e-12);
}

TEST(FixedDegree, RejectsSmallN) {
  const int ns[] = {5};
  EXPECT_THROW(fixed_degree_convergence(EnsembleKind::kKac, 5, ns, 1), std::invalid_argument);
}
