// Acceptance suite: one PASS/FAIL line per criterion.
//
//   rootlaw_acceptance            run every criterion
//   rootlaw_acceptance 3 7        run the listed criteria only
//
// Exit status is 0 only when every selected criterion passes.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "rootlaw/calculus.hpp"
#include "rootlaw/ensembles.hpp"
#include "rootlaw/experiments.hpp"
#include "rootlaw/limits.hpp"
#include "rootlaw/rootfind.hpp"

using namespace rootlaw;

namespace {

constexpr std::uint64_t kSeed = 1;

struct Outcome {
  bool pass = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what;
  }
};

std::string Num(double v, int precision = 4) {
  std::ostringstream out;
  out.precision(precision);
  out << v;
  return out.str();
}

ExperimentConfig Config(const std::string& ensemble, int n, DerivativeRule rule, int trials) {
  ExperimentConfig config;
  config.ensemble = ensemble;
  config.n = n;
  config.rule = rule;
  config.trials = trials;
  config.seed = kSeed;
  return config;
}

std::string FailureNote(const Report& report) {
  return report.failed_trials == 0 ? "" : " (" + std::to_string(report.failed_trials) + " failed trials)";
}

Outcome TransformsMatchClosedForms() {
  Outcome out;
  const auto grid = default_s_grid();
  struct Case {
    ProfileKind kind;
    double a;
    std::string name;
  };
  const Case cases[] = {
      {ProfileKind::kKac, 0.0, "kac"},
      {ProfileKind::kKacCase2, 0.25, "case2(0.25)"},
      {ProfileKind::kKacCase2, 0.5, "case2(0.5)"},
      {ProfileKind::kKacCase2, 0.75, "case2(0.75)"},
      {ProfileKind::kKacCase3Rescaled, 0.0, "case3"},
      {ProfileKind::kEllipticRescaled, 0.0, "elliptic-rescaled"},
  };
  for (const auto& c : cases) {
    const auto tr = legendre_fenchel(make_profile(c.kind, c.a), grid);
    double worst = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      worst = std::max(worst, std::abs(tr.values[i] - closed_form_transform(c.kind, grid[i], c.a)));
    }
    out.check(worst <= 1e-3, c.name + " max err " + Num(worst, 3) + " <= 1e-3");
  }
  return out;
}

Outcome KacBaselineConcentratesOnCircle() {
  Outcome out;
  const int n = 800;
  for (const int order : {0, static_cast<int>(std::floor(std::pow(n, 0.3)))}) {
    auto config = Config("kac", n, {DerivativeRule::Kind::kExplicit, static_cast<double>(order)}, 20);
    config.annuli = {{0.9, 1.1}};
    const auto report = run_trials(config);
    const double fraction = report.mean_annulus_fractions.at(0);
    out.check(fraction >= 0.9 && report.failed_trials == 0,
              "N=" + std::to_string(order) + " mass in ||z|-1|<=0.1 = " + Num(fraction) + " >= 0.9" +
                  FailureNote(report));
  }
  return out;
}

Outcome KacHalfDerivativeLaw() {
  Outcome out;
  auto config = Config("kac", 800, {DerivativeRule::Kind::kExplicit, 400}, 20);
  config.target = "kac-a:0.5";
  const auto report = run_trials(config);
  out.check(report.pooled_ks <= 0.05 && report.failed_trials == 0,
            "pooled KS " + Num(report.pooled_ks) + " <= 0.05" + FailureNote(report));
  out.check(report.angular_discrepancy <= 0.05, "Kuiper " + Num(report.angular_discrepancy) + " <= 0.05");
  return out;
}

Outcome RescaledLaw(const std::string& ensemble, const std::string& target) {
  Outcome out;
  auto config = Config(ensemble, 2000, {DerivativeRule::Kind::kFixedDegree, 100}, 10);
  config.rescale = RescaleMode::kAuto;
  config.target = target;
  const auto report = run_trials(config);
  out.check(report.pooled_ks <= 0.08 && report.failed_trials == 0,
            "scale " + Num(std::exp(report.log_rescale)) + ", pooled KS " + Num(report.pooled_ks) + " <= 0.08" +
                FailureNote(report));
  return out;
}

Outcome EllipticRescaledLaw() {
  Outcome out = RescaledLaw("elliptic", "elliptic-rescaled");
  const double at_one = closed_form_cdf(ClosedFormCase::kEllipticRescaled, 1.0);
  const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
  out.check(std::abs(at_one - golden) <= 1e-15, "F(1) = " + Num(at_one, 17) + " vs (sqrt5-1)/2");
  return out;
}

Outcome FixedDegreeConvergence() {
  Outcome out;
  const int ns[] = {100, 1000};
  const auto kac = fixed_degree_convergence(EnsembleKind::kKac, 5, ns, kSeed);
  out.check(kac.distances[1] <= kac.distances[0] / 5,
            "kac m=5: " + Num(kac.distances[0]) + " -> " + Num(kac.distances[1]) + " (ratio <= 0.2)");
  const auto elliptic = fixed_degree_convergence(EnsembleKind::kElliptic, 3, ns, kSeed);
  out.check(elliptic.distances[1] <= elliptic.distances[0] / 5,
            "elliptic m=3: " + Num(elliptic.distances[0]) + " -> " + Num(elliptic.distances[1]) +
                " (ratio <= 0.2)");
  return out;
}

Outcome CounterexampleStaysNearCircle() {
  Outcome out;
  auto config = Config("counterexample", 1000, {DerivativeRule::Kind::kLogDegree, 0}, 20);
  config.annuli = {{0.85, 1.15}};
  const auto report = run_trials(config);
  const double fraction = report.mean_annulus_fractions.at(0);
  out.check(fraction >= 0.8 && report.failed_trials == 0,
            "D=" + std::to_string(report.derivative_degree) + ", mass in ||z|-1|<=0.15 = " + Num(fraction) +
                " >= 0.8" + FailureNote(report));
  return out;
}

Outcome ComposedEllipticLaw() {
  Outcome out;
  auto config = Config("elliptic", 800, {DerivativeRule::Kind::kRatio, 0.5}, 20);
  config.target = "lf:elliptic:0.5";
  const auto report = run_trials(config);
  out.check(report.pooled_ks <= 0.08 && report.failed_trials == 0,
            "pooled KS " + Num(report.pooled_ks) + " <= 0.08" + FailureNote(report));
  return out;
}

Outcome CompanionOracleAgreement() {
  Outcome out;
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> degree_dist(1, 64);
  std::normal_distribution<double> gauss;
  double worst = 0.0;
  int failures = 0;
  for (int i = 0; i < 200; ++i) {
    const int degree = degree_dist(rng);
    std::vector<std::complex<double>> coeffs(degree + 1);
    for (auto& c : coeffs) c = {gauss(rng), gauss(rng)};
    try {
      const auto roots = find_roots(SampledPolynomial::from_coefficients(coeffs)).roots;
      worst = std::max(worst, match_roots(roots, oracle::companion_roots(coeffs)).max_distance);
    } catch (const RootFindError&) {
      ++failures;
    }
  }
  out.check(worst <= 1e-8 && failures == 0,
            "200 polynomials, max paired distance " + Num(worst, 3) + " <= 1e-8, " + std::to_string(failures) +
                " solver failures");
  return out;
}

Outcome Diagnostics() {
  Outcome out;
  bool kac_zero = true;
  for (int n : {100, 1000, 4000}) {
    for (int order : {0, n / 2, n - n / 20, n - 1}) {
      const auto d = ensemble_diagnostics(make_log_coeffs(EnsembleKind::kKac, n), order,
                                          make_profile(ProfileKind::kKac));
      kac_zero = kac_zero && d.eta == 0.0;
    }
  }
  out.check(kac_zero, "kac eta == 0 on all (n, N)");
  for (int n : {1000, 4000}) {
    const int degree = n / 20;
    const auto d = ensemble_diagnostics(make_log_coeffs(EnsembleKind::kElliptic, n), n - degree,
                                        make_profile(ProfileKind::kElliptic));
    const double reference = std::log(static_cast<double>(degree)) / (4.0 * n);
    const double ratio = d.eta / reference;
    out.check(ratio >= 0.5 && ratio <= 2.0, "elliptic n=" + std::to_string(n) + " eta/(log D/4n) = " + Num(ratio));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::map<int, std::pair<std::string, std::function<Outcome()>>> criteria = {
      {1, {"numeric transform vs closed forms", TransformsMatchClosedForms}},
      {2, {"kac baseline concentrates on the unit circle", KacBaselineConcentratesOnCircle}},
      {3, {"kac N=n/2 radial and angular law", KacHalfDerivativeLaw}},
      {4, {"kac rescaled law min(r,1)", [] { return RescaledLaw("kac", "kac-rescaled"); }}},
      {5, {"elliptic rescaled law", EllipticRescaledLaw}},
      {6, {"fixed-degree convergence", FixedDegreeConvergence}},
      {7, {"counterexample keeps zeros near the circle", CounterexampleStaysNearCircle}},
      {8, {"composed elliptic profile vs Monte Carlo", ComposedEllipticLaw}},
      {9, {"Aberth vs companion-matrix oracle", CompanionOracleAgreement}},
      {10, {"coefficient diagnostics", Diagnostics}},
  };

  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int id = std::atoi(argv[i]);
    if (!criteria.contains(id)) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 1;
    }
    selected.push_back(id);
  }
  if (selected.empty()) {
    for (const auto& [id, entry] : criteria) selected.push_back(id);
  }

  int failed = 0;
  for (const int id : selected) {
    const auto& [name, run] = criteria.at(id);
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& e) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + e.what();
    }
    failed += outcome.pass ? 0 : 1;
    std::printf("[%s] criterion %2d  %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, name.c_str(),
                outcome.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%zu criteria, %d failed\n", selected.size(), failed);
  return failed == 0 ? 0 : 1;
}
