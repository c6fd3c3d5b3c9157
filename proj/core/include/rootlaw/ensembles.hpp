#pragma once

// Coefficient profiles, deterministic coefficient sequences and random draws.
//
// A random polynomial of degree n is sum_k xi_k p_{k,n} z^k with i.i.d. xi_k.
// The deterministic magnitudes p_{k,n} are always stored as log p_{k,n}; raw
// binomials and factorials overflow long before the degrees used here.

#include <complex>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace rootlaw {

/// t -> log p(t) on [0, inf), with p(t) > 0 on [0, T0) and p(t) = 0 past T0.
class CoefficientProfile {
 public:
  CoefficientProfile(std::function<double(double)> log_p, double support_end,
                     std::string label);

  /// log p(t); kLogZero for t > T0. The raw function is only consulted on
  /// [0, T0].
  double operator()(double t) const;

  double support_end() const { return support_end_; }
  const std::string& label() const { return label_; }

 private:
  std::function<double(double)> log_p_;
  double support_end_;
  std::string label_;
};

enum class ProfileKind {
  kKac,                // log p = 0 on [0, 1]
  kElliptic,           // -t log t / 2 - (1 - t) log(1 - t) / 2
  kKacCase2,           // composed profile u_a of the Kac ensemble, support [0, 1 - a]
  kKacCase3Rescaled,   // t - 1 - t log t
  kEllipticRescaled,   // (t - 1)/2 - (1 - t) log(1 - t)/2 - t log t
};

/// Builds one of the named profiles. `a` is only read for kKacCase2 and must
/// lie in (0, 1).
CoefficientProfile make_profile(ProfileKind kind, double a = 0.0);

/// Piecewise-linear profile through (t, log p(t)) rows. The first row must be
/// t = 0, t strictly increasing, every value finite; T0 is the last t.
CoefficientProfile make_profile(std::span<const std::pair<double, double>> table,
                                std::string label = "custom");

/// Reads a whitespace-separated two-column table (t, log p(t)). Blank lines
/// and lines starting with '#' are ignored.
CoefficientProfile load_profile_table(const std::filesystem::path& path);

/// Parses "kac", "elliptic", "kac-case2:<a>", "kac-case3-rescaled",
/// "elliptic-rescaled" or "profile:<file>".
CoefficientProfile parse_profile(std::string_view label);

/// log f_1(t) = (t + a) log(t + a) - t log t + (1 - a) log(1 - a), t >= 0.
/// The limit of n^-1 log f_{k,n} at k = t n when N_n / n -> a.
double kac_case2_log_f1(double t, double a);

/// Checks the profile invariants on a uniform grid of `grid_points` points:
/// finite on [0, T0) and the largest adjacent jump does not grow when the
/// grid is refined by a factor of two. Throws std::invalid_argument.
void validate_profile(const CoefficientProfile& profile, int grid_points = 10000);

/// Deterministic log-magnitudes {log p_{k,n}}, k = 0..n, of one ensemble.
struct LogCoefficients {
  std::vector<double> log_mag;
  std::string ensemble_label;

  int degree() const { return static_cast<int>(log_mag.size()) - 1; }
};

enum class EnsembleKind { kKac, kElliptic, kCounterexample, kProfileDriven };

/// An ensemble addressed by its CLI label:
/// kac | elliptic | counterexample | profile:<file>.
struct EnsembleSpec {
  EnsembleKind kind = EnsembleKind::kKac;
  std::optional<CoefficientProfile> profile;  // set for kProfileDriven
  std::string label;
};

EnsembleSpec parse_ensemble(std::string_view label);

/// The profile each named ensemble is fitted against (kac for the
/// counterexample, the table itself for profile-driven).
CoefficientProfile reference_profile(const EnsembleSpec& spec);

/// Degree of the derivative used by the counterexample ensemble,
/// floor(log n).
int counterexample_default_degree(int n);

/// Deterministic coefficients of degree n.
///  kac:            log p_{k,n} = 0
///  elliptic:       log p_{k,n} = log C(n, k) / 2
///  counterexample: 0 for k < N_n, log(n! (k - N_n)! / (k! D_n!)) otherwise,
///                  with D_n = `counterexample_degree` (default floor(log n))
///  profile-driven: n log p(k / n)
/// Throws std::invalid_argument for n < 1 or D_n < 1.
LogCoefficients make_log_coeffs(EnsembleKind kind, int n,
                                std::optional<int> counterexample_degree = std::nullopt);
LogCoefficients make_log_coeffs(const CoefficientProfile& profile, int n);
LogCoefficients make_log_coeffs(const EnsembleSpec& spec, int n);

enum class SamplerKind {
  kComplexGaussian,   // (X + iY)/sqrt(2), E|xi|^2 = 1
  kRealGaussian,      // N(0, 1)
  kUniformUnitDisk,   // uniform on the open unit disk
  kRademacher,        // +-1 with probability 1/2
  kHeavyTailLog,      // log|xi| Pareto(alpha), uniform phase: E log(1+|xi|) = inf
};

struct SamplerSpec {
  SamplerKind kind = SamplerKind::kComplexGaussian;
  /// kHeavyTailLog: {alpha} (default 1). Other kinds take no parameters.
  std::vector<double> parameters;

  /// True when E log(1 + |xi|) < inf; only kHeavyTailLog violates it.
  bool has_finite_log_moment() const { return kind != SamplerKind::kHeavyTailLog; }
  bool real_valued() const {
    return kind == SamplerKind::kRealGaussian || kind == SamplerKind::kRademacher;
  }
  std::string name() const;
};

/// gaussian | complex-gaussian | real-gaussian | uniform-disk | rademacher |
/// heavy-tail-log[:alpha]
SamplerSpec parse_sampler(std::string_view label);

struct SeedRecord {
  std::uint64_t master_seed = 0;
  std::uint64_t trial = 0;
};

/// One random draw: deterministic log-magnitudes paired with xi_k. The
/// coefficient of z^k is xi[k] * exp(log_mag[k]).
struct SampledPolynomial {
  std::vector<double> log_mag;
  std::vector<std::complex<double>> xi;
  SeedRecord seed_record;

  int degree() const { return static_cast<int>(log_mag.size()) - 1; }

  /// Wraps explicit coefficients c_0..c_D (lowest degree first). Each c_k is
  /// stored whole in xi[k] with log_mag[k] = 0, so it is reproduced exactly.
  static SampledPolynomial from_coefficients(std::span<const std::complex<double>> coeffs);
};

/// xi_k are a pure function of (master_seed, trial, k), so trials can be
/// drawn in any order or concurrently.
SampledPolynomial sample_polynomial(const LogCoefficients& coeffs, const SamplerSpec& sampler,
                                    std::uint64_t master_seed, std::uint64_t trial);

/// Per instance, sup over 0 <= k <= (T0 - delta) L of
/// |log_mag[k] / L - log p(min(k / L, T0))|.
/// (T0 - delta) L must be a nonnegative integer no larger than the degree.
std::vector<double> check_profile_fit(std::span<const LogCoefficients> coeffs_sequence,
                                      const CoefficientProfile& profile,
                                      std::span<const int> scale, std::span<const double> delta);

struct EnsembleDiagnostics {
  double eta = 0.0;    ///< sup_{N<=k<=n} |log_mag[k] / n - log p(k / n)|
  double log_b = 0.0;  ///< log sup_{N<=k<=n} p_{k,n}
};

EnsembleDiagnostics ensemble_diagnostics(const LogCoefficients& coeffs, int derivative_order,
                                         const CoefficientProfile& profile);

}  // namespace rootlaw
