#pragma once

// Repeated differentiation and dilation acting on log-magnitude coefficients.

#include "rootlaw/ensembles.hpp"

namespace rootlaw {

/// Differentiating a degree-n polynomial N_n times leaves degree D_n = n - N_n.
class DerivativePlan {
 public:
  /// Throws std::invalid_argument unless 0 <= order <= degree.
  DerivativePlan(int degree, int order);

  int degree() const { return degree_; }                  ///< n
  int order() const { return order_; }                    ///< N_n
  int result_degree() const { return degree_ - order_; }  ///< D_n
  double ratio() const { return static_cast<double>(order_) / degree_; }

 private:
  int degree_;
  int order_;
};

/// log f_{k,n} = log[(k + N_n)! D_n! / (k! n!)], 0 <= k <= D_n. Always <= 0,
/// and 0 at k = D_n.
double log_fkn(int k, const DerivativePlan& plan);

/// Deterministic part of the N_n-th derivative, normalized so the leading
/// coefficient carries f_{D_n,n} = 1:
///   out[k] = coeffs[k + N_n] + log f_{k,n},  k = 0..D_n.
/// The shifted xi indices are not tracked; callers draw fresh i.i.d. xi.
LogCoefficients differentiate(const LogCoefficients& coeffs, const DerivativePlan& plan);

/// Coefficients of h^D q(z / h): entry k gains (D - k) log h, so every zero
/// of the represented polynomial is multiplied by h.
LogCoefficients rescale(const LogCoefficients& coeffs, double log_h);

/// log of the factor by which derivative zeros are multiplied to reach a
/// nondegenerate limit:
///   kac:      log(n / D_n), or log n for fixed degree
///   elliptic: log(n / D_n) / 2, or log(n) / 2 for fixed degree
/// Throws std::invalid_argument for other ensemble kinds.
double recommended_rescale(EnsembleKind kind, const DerivativePlan& plan, bool fixed_degree);

}  // namespace rootlaw
