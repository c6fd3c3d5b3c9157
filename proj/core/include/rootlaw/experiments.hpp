#pragma once

// Seeded Monte Carlo runs: sample -> differentiate -> rescale -> find roots ->
// empirical statistics, plus report persistence.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rootlaw/calculus.hpp"
#include "rootlaw/ensembles.hpp"
#include "rootlaw/measures.hpp"
#include "rootlaw/rootfind.hpp"

namespace rootlaw {

/// How the differentiation order N_n is chosen for degree n.
struct DerivativeRule {
  enum class Kind {
    kExplicit,     ///< N_n = value
    kRatio,        ///< N_n = floor(value * n)
    kLogDegree,    ///< N_n = n - floor(log n)
    kFixedDegree,  ///< N_n = n - value
  };
  Kind kind = Kind::kExplicit;
  double value = 0.0;

  /// Throws std::invalid_argument unless 0 <= N_n < n.
  int resolve(int n) const;
  std::string describe() const;
};

/// kAuto multiplies the derivative zeros by n / D_n (kac) or sqrt(n / D_n)
/// (elliptic); the fixed-degree scalings live in fixed_degree_convergence.
enum class RescaleMode { kNone, kAuto };

/// Reference radial law for KS comparisons. Parsed from:
///   kac-unit-circle | kac-a:<a> | kac-rescaled | elliptic-rescaled |
///   lf:<profile>[:<a>]
/// The last form runs the numeric Legendre-Fenchel pipeline on the named
/// profile (composed with u_a and renormalized by 1 - a when a > 0).
struct ComparisonTarget {
  std::string label;
  RadialCDF cdf;
};

ComparisonTarget parse_target(std::string_view label);

struct ExperimentConfig {
  std::string ensemble = "kac";
  SamplerSpec sampler;
  int n = 100;
  DerivativeRule rule;
  RescaleMode rescale = RescaleMode::kNone;
  int trials = 1;
  std::uint64_t seed = 0;
  std::optional<std::string> target;
  /// [lo, hi] modulus bands whose mean mass is reported.
  std::vector<std::pair<double, double>> annuli;
  RootFindOptions root_options;
  /// Worker threads for trial-level parallelism; results do not depend on it.
  int threads = 1;
};

struct TrialResult {
  int trial = 0;
  bool failed = false;
  std::string failure;
  std::vector<std::complex<double>> roots;  ///< after rescaling
  double ks = 0.0;                          ///< NaN without a target
  double angular_discrepancy = 0.0;
  std::vector<double> annulus_fractions;
  ResidualStats residuals;
};

struct Report {
  ExperimentConfig config;
  int derivative_order = 0;  ///< resolved N_n
  int derivative_degree = 0;  ///< D_n
  double log_rescale = 0.0;   ///< log h applied to the derivative
  std::vector<TrialResult> trials;
  double pooled_ks = 0.0;  ///< NaN without a target
  double angular_discrepancy = 0.0;
  std::vector<double> mean_annulus_fractions;
  int failed_trials = 0;
  std::size_t pooled_root_count = 0;
  ResidualStats residuals;  ///< worst / median of the per-trial values
  double runtime_seconds = 0.0;

  std::vector<double> per_trial_ks() const;
};

/// Deterministic given (config, seed) regardless of `threads`. Trials whose
/// root finding fails are flagged and left out of every pooled statistic.
Report run_trials(const ExperimentConfig& config);

/// Pooled empirical measure of all successful trials.
EmpiricalMeasure pooled_measure(const Report& report);

struct FixedDegreeResult {
  std::vector<std::complex<double>> xi;
  std::vector<std::complex<double>> limit_roots;
  std::vector<double> distances;  ///< one per n, max matched distance
};

/// For one xi draw of length m + 1, compares the zeros of the (n - m)-th
/// derivative, scaled by n (kac) or sqrt n (elliptic), with the zeros of the
/// fixed-degree limit polynomial. Every n must exceed m.
FixedDegreeResult fixed_degree_convergence(EnsembleKind kind, int m, std::span<const int> n_list,
                                           std::uint64_t seed,
                                           const SamplerSpec& sampler = SamplerSpec{});
/// Same, with xi supplied by the caller.
FixedDegreeResult fixed_degree_convergence(EnsembleKind kind, int m, std::span<const int> n_list,
                                           std::span<const std::complex<double>> xi);

struct ReportPaths {
  std::filesystem::path roots_csv;
  std::filesystem::path summary_json;
};

/// Roots CSV with header `trial,re,im,modulus,angle` (successful trials only)
/// and a summary JSON with keys config, pooled_ks, per_trial_ks,
/// angular_discrepancy, failed_trials, runtime_seconds (plus a few extras).
/// Floats in the CSV carry 17 significant digits.
void write_report(const Report& report, const ReportPaths& paths);

/// `%.17g`-style formatting used by the CSV writer.
std::string format_double(double value);

}  // namespace rootlaw
