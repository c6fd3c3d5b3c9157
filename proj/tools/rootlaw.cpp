// rootlaw: command-line driver for the random polynomial derivative library.
//
//   rootlaw simulate     --ensemble kac --n 800 --ratio 0.5 --trials 20 --out run/
//   rootlaw compare      ... --target kac-a:0.5
//   rootlaw limit        --target elliptic-rescaled --grid 0.01:3:0.01
//   rootlaw check-fit    --ensemble elliptic --n 1000,4000 --fixed-m 50
//   rootlaw fixed-degree --ensemble kac --fixed-m 5 --n 100,1000
//
// Exit status: 0 on success, 2 when any trial failed, 1 on usage errors.

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rootlaw/calculus.hpp"
#include "rootlaw/ensembles.hpp"
#include "rootlaw/experiments.hpp"
#include "rootlaw/limits.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitFailedTrials = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RuleFlags {
  std::optional<double> ratio;
  std::optional<int> order;
  std::optional<int> fixed_m;
  bool log_degree = false;
};

void AddRuleFlags(CLI::App& cmd, RuleFlags& flags) {
  auto* ratio = cmd.add_option("--ratio", flags.ratio, "N_n = floor(ratio * n)");
  auto* order = cmd.add_option("--Nn", flags.order, "explicit derivative order N_n");
  auto* fixed = cmd.add_option("--fixed-m", flags.fixed_m, "keep derivative degree D_n = m");
  auto* logd = cmd.add_flag("--log-degree", flags.log_degree, "N_n = n - floor(log n)");
  ratio->excludes(order, fixed, logd);
  order->excludes(fixed, logd);
  fixed->excludes(logd);
}

rootlaw::DerivativeRule MakeRule(const RuleFlags& flags) {
  using Kind = rootlaw::DerivativeRule::Kind;
  if (flags.ratio) return {Kind::kRatio, *flags.ratio};
  if (flags.fixed_m) return {Kind::kFixedDegree, static_cast<double>(*flags.fixed_m)};
  if (flags.log_degree) return {Kind::kLogDegree, 0.0};
  return {Kind::kExplicit, static_cast<double>(flags.order.value_or(0))};
}

std::vector<double> ParseGrid(const std::string& spec) {
  std::vector<double> parts;
  std::size_t begin = 0;
  while (begin <= spec.size()) {
    const std::size_t end = std::min(spec.find(':', begin), spec.size());
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(spec.data() + begin, spec.data() + end, value);
    if (ec != std::errc() || ptr != spec.data() + end) {
      throw UsageError("--grid expects lo:hi:step, got '" + spec + "'");
    }
    parts.push_back(value);
    begin = end + 1;
  }
  if (parts.size() != 3 || !(parts[2] > 0.0) || !(parts[1] >= parts[0])) {
    throw UsageError("--grid expects lo:hi:step with step > 0 and hi >= lo");
  }
  std::vector<double> grid;
  const auto count = static_cast<long>(std::floor((parts[1] - parts[0]) / parts[2] + 1e-9));
  for (long i = 0; i <= count; ++i) grid.push_back(parts[0] + static_cast<double>(i) * parts[2]);
  return grid;
}

std::pair<double, double> ParseAnnulus(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw UsageError("--annulus expects lo:hi");
  try {
    return {std::stod(spec.substr(0, colon)), std::stod(spec.substr(colon + 1))};
  } catch (const std::exception&) {
    throw UsageError("--annulus expects lo:hi, got '" + spec + "'");
  }
}

std::string Fmt(double value) { return rootlaw::format_double(value); }

struct SimulateFlags {
  std::string ensemble = "kac";
  std::string dist = "gaussian";
  std::vector<int> n{100};
  RuleFlags rule;
  int trials = 1;
  std::uint64_t seed = 0;
  std::string rescale = "none";
  std::string target;
  std::string out;
  std::vector<std::string> annuli;
  int threads = 1;
  double tol = 1e-12;
};

void AddSimulateFlags(CLI::App& cmd, SimulateFlags& flags) {
  cmd.add_option("--ensemble", flags.ensemble, "kac | elliptic | counterexample | profile:<file>")
      ->capture_default_str();
  cmd.add_option("--dist", flags.dist,
                 "gaussian | real-gaussian | uniform-disk | rademacher | heavy-tail-log[:alpha]")
      ->capture_default_str();
  cmd.add_option("--n", flags.n, "polynomial degree(s), comma separated")
      ->delimiter(',')
      ->capture_default_str();
  AddRuleFlags(cmd, flags.rule);
  cmd.add_option("--trials", flags.trials)->capture_default_str();
  cmd.add_option("--seed", flags.seed)->capture_default_str();
  cmd.add_option("--rescale", flags.rescale)
      ->check(CLI::IsMember({"auto", "none"}))
      ->capture_default_str();
  cmd.add_option("--target", flags.target,
                 "kac-unit-circle | kac-a:<a> | kac-rescaled | elliptic-rescaled | lf:<profile>[:<a>]");
  cmd.add_option("--out", flags.out, "directory receiving roots.csv and summary.json");
  cmd.add_option("--annulus", flags.annuli, "modulus band lo:hi (repeatable)");
  cmd.add_option("--threads", flags.threads)->capture_default_str();
  cmd.add_option("--tol", flags.tol, "root-finder step tolerance")->capture_default_str();
}

int RunSimulate(const SimulateFlags& flags, bool require_target) {
  if (require_target && flags.target.empty()) throw UsageError("compare needs --target");
  rootlaw::ExperimentConfig config;
  config.ensemble = flags.ensemble;
  config.sampler = rootlaw::parse_sampler(flags.dist);
  config.rule = MakeRule(flags.rule);
  config.rescale = flags.rescale == "auto" ? rootlaw::RescaleMode::kAuto : rootlaw::RescaleMode::kNone;
  config.trials = flags.trials;
  config.seed = flags.seed;
  if (!flags.target.empty()) config.target = flags.target;
  for (const auto& band : flags.annuli) config.annuli.push_back(ParseAnnulus(band));
  config.threads = flags.threads;
  config.root_options.tol = flags.tol;
  config.root_options.residual_tol = std::max(1e-12, flags.tol);

  bool any_failed = false;
  std::cout << "n,N_n,D_n,log_rescale,roots,failed_trials,pooled_ks,angular_discrepancy";
  for (const auto& band : flags.annuli) std::cout << ",annulus[" << band << "]";
  std::cout << '\n';
  for (const int n : flags.n) {
    config.n = n;
    const rootlaw::Report report = rootlaw::run_trials(config);
    std::cout << n << ',' << report.derivative_order << ',' << report.derivative_degree << ','
              << Fmt(report.log_rescale) << ',' << report.pooled_root_count << ','
              << report.failed_trials << ',' << Fmt(report.pooled_ks) << ','
              << Fmt(report.angular_discrepancy);
    for (const double fraction : report.mean_annulus_fractions) std::cout << ',' << Fmt(fraction);
    std::cout << '\n';
    for (const auto& trial : report.trials) {
      if (trial.failed) std::cerr << "trial " << trial.trial << " failed: " << trial.failure << '\n';
    }
    any_failed = any_failed || report.failed_trials > 0;

    if (!flags.out.empty()) {
      std::filesystem::path dir = flags.out;
      if (flags.n.size() > 1) dir /= "n" + std::to_string(n);
      std::filesystem::create_directories(dir);
      rootlaw::write_report(report, {dir / "roots.csv", dir / "summary.json"});
    }
  }
  return any_failed ? kExitFailedTrials : 0;
}

int RunLimit(const std::string& target_label, const std::string& grid_spec, const std::string& out) {
  const rootlaw::ComparisonTarget target = rootlaw::parse_target(target_label);
  const std::vector<double> grid = ParseGrid(grid_spec);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw std::runtime_error("cannot open '" + out + "' for writing");
  }
  std::ostream& sink = out.empty() ? std::cout : file;
  sink << "r,cdf\n";
  for (const double r : grid) sink << Fmt(r) << ',' << Fmt(target.cdf(r)) << '\n';
  return 0;
}

int RunCheckFit(const std::string& ensemble_label, const std::vector<int>& ns, const RuleFlags& rule_flags,
                std::optional<double> delta) {
  const rootlaw::EnsembleSpec spec = rootlaw::parse_ensemble(ensemble_label);
  const rootlaw::CoefficientProfile profile = rootlaw::reference_profile(spec);
  const rootlaw::DerivativeRule rule = MakeRule(rule_flags);
  std::cout << "n,N_n,eta,log_b,log_over_4n";
  if (delta) std::cout << ",fit_error";
  std::cout << '\n';
  for (const int n : ns) {
    const rootlaw::LogCoefficients coeffs = rootlaw::make_log_coeffs(spec, n);
    const int order = rule.resolve(n);
    const auto diag = rootlaw::ensemble_diagnostics(coeffs, order, profile);
    const double reference = std::log(static_cast<double>(n - order)) / (4.0 * n);
    std::cout << n << ',' << order << ',' << Fmt(diag.eta) << ',' << Fmt(diag.log_b) << ','
              << Fmt(reference);
    if (delta) {
      const int scale = n;
      const auto fit = rootlaw::check_profile_fit({&coeffs, 1}, profile, {&scale, 1}, {&*delta, 1});
      std::cout << ',' << Fmt(fit.front());
    }
    std::cout << '\n';
  }
  return 0;
}

int RunFixedDegree(const std::string& ensemble_label, int m, const std::vector<int>& ns,
                   std::uint64_t seed, const std::string& dist) {
  const rootlaw::EnsembleSpec spec = rootlaw::parse_ensemble(ensemble_label);
  const auto result =
      rootlaw::fixed_degree_convergence(spec.kind, m, ns, seed, rootlaw::parse_sampler(dist));
  std::cout << "n,max_pair_distance\n";
  for (std::size_t i = 0; i < ns.size(); ++i) {
    std::cout << ns[i] << ',' << Fmt(result.distances[i]) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Zeros of high-order derivatives of random polynomials"};
  app.require_subcommand(1);

  SimulateFlags simulate_flags;
  auto* simulate = app.add_subcommand("simulate", "run seeded Monte Carlo trials");
  AddSimulateFlags(*simulate, simulate_flags);

  SimulateFlags compare_flags;
  auto* compare = app.add_subcommand("compare", "simulate and report KS distance to --target");
  AddSimulateFlags(*compare, compare_flags);

  std::string limit_target;
  std::string limit_grid = "0.01:2:0.01";
  std::string limit_out;
  auto* limit = app.add_subcommand("limit", "tabulate a limiting radial CDF as CSV");
  limit->add_option("--target", limit_target)->required();
  limit->add_option("--grid", limit_grid, "lo:hi:step in r")->capture_default_str();
  limit->add_option("--out", limit_out, "CSV file (default stdout)");

  std::string fit_ensemble = "kac";
  std::vector<int> fit_n{1000};
  RuleFlags fit_rule;
  std::optional<double> fit_delta;
  auto* check_fit = app.add_subcommand("check-fit", "coefficient profile diagnostics");
  check_fit->add_option("--ensemble", fit_ensemble)->capture_default_str();
  check_fit->add_option("--n", fit_n)->delimiter(',')->capture_default_str();
  AddRuleFlags(*check_fit, fit_rule);
  check_fit->add_option("--delta", fit_delta, "also report the profile fit on [0, T0 - delta]");

  std::string fixed_ensemble = "kac";
  int fixed_m = 5;
  std::vector<int> fixed_n{100, 1000};
  std::uint64_t fixed_seed = 0;
  std::string fixed_dist = "gaussian";
  auto* fixed = app.add_subcommand("fixed-degree", "fixed-degree derivative convergence");
  fixed->add_option("--ensemble", fixed_ensemble, "kac | elliptic")->capture_default_str();
  fixed->add_option("--fixed-m", fixed_m)->capture_default_str();
  fixed->add_option("--n", fixed_n)->delimiter(',')->capture_default_str();
  fixed->add_option("--seed", fixed_seed)->capture_default_str();
  fixed->add_option("--dist", fixed_dist)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return RunSimulate(simulate_flags, false);
    if (*compare) return RunSimulate(compare_flags, true);
    if (*limit) return RunLimit(limit_target, limit_grid, limit_out);
    if (*check_fit) return RunCheckFit(fit_ensemble, fit_n, fit_rule, fit_delta);
    if (*fixed) return RunFixedDegree(fixed_ensemble, fixed_m, fixed_n, fixed_seed, fixed_dist);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid argument: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "out of range: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
