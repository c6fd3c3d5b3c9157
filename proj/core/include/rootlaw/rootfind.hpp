#pragma once

// All complex zeros of a sampled polynomial by simultaneous Aberth-Ehrlich
// iteration.
//
// Coefficients are materialized from log-magnitudes after subtracting the
// largest one, in extended precision, so degree-several-thousand inputs whose
// magnitudes span thousands of nats stay representable. Starting points sit
// on circles whose radii are read off the upper convex hull of (k, log|c_k|).

#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "rootlaw/ensembles.hpp"

namespace rootlaw {

struct RootFindOptions {
  /// A root is converged once its Aberth correction is below tol (1 + |z|).
  double tol = 1e-12;
  /// Largest accepted normalized residual |p(z)| / sum |c_k| |z|^k.
  double residual_tol = 1e-12;
  int max_iterations = 200;
};

struct ResidualStats {
  double max = 0.0;
  double median = 0.0;
};

struct RootSet {
  std::vector<std::complex<double>> roots;
  std::vector<bool> converged;  ///< per root, parallel to `roots`
  std::vector<double> residuals;
  int degree = 0;
  int iterations = 0;
  bool restarted = false;
  ResidualStats residual_stats;

  bool all_converged() const;
};

/// Raised when some roots fail to converge even after the restart. The
/// partial result keeps every root together with its convergence flag.
class RootFindError : public std::runtime_error {
 public:
  RootFindError(const std::string& what, RootSet partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const RootSet& partial() const { return partial_; }

 private:
  RootSet partial_;
};

/// Zero leading coefficients are trimmed; zero low-order coefficients
/// contribute exact roots at 0. Throws std::invalid_argument when nothing of
/// positive degree remains and RootFindError on non-convergence.
RootSet find_roots(const SampledPolynomial& poly, const RootFindOptions& options);
RootSet find_roots(const SampledPolynomial& poly, double tol = 1e-12);

/// |p(z)| / sum_k |c_k| |z|^k, evaluated by compensated Horner (on the
/// reversed polynomial when |z| > 1). Zero only at exact roots.
double root_residual(const SampledPolynomial& poly, std::complex<double> z);

struct RootMatching {
  std::vector<int> assignment;  ///< assignment[i] indexes the partner of lhs[i] in rhs
  double max_distance = 0.0;
  double total_distance = 0.0;
};

/// Minimum-total-distance perfect matching between equal-size root sets
/// (Hungarian algorithm, O(m^3)).
RootMatching match_roots(std::span<const std::complex<double>> lhs,
                         std::span<const std::complex<double>> rhs);

}  // namespace rootlaw
