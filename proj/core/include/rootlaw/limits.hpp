#pragma once

// Deterministic limit laws of the zeros: the Legendre-Fenchel transform of
// -log p, radial CDFs read off its left derivative, and every closed form
// the ensembles in this library admit.

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "rootlaw/ensembles.hpp"

namespace rootlaw {

/// I(s) = sup_{t >= 0} (s t + log p(t)) tabulated on an s-grid.
struct TransformResult {
  std::vector<double> s_grid;
  std::vector<double> values;
  double support_end = 0.0;  ///< T0 of the transformed profile, the largest slope of I
  std::string profile_label;
};

/// 2001 uniform points on [-8, 8].
std::vector<double> default_s_grid();

/// Discrete maximum over a uniform t-grid with `t_resolution` intervals on
/// [0, T0], then a 40-step golden-section refinement around the argmax.
/// `s_grid` must be strictly increasing; t_resolution >= 1000.
TransformResult legendre_fenchel(const CoefficientProfile& profile, std::span<const double> s_grid,
                                 int t_resolution = 10000);
TransformResult legendre_fenchel(const CoefficientProfile& profile);

/// I evaluated at one s by the same procedure.
double legendre_fenchel_at(const CoefficientProfile& profile, double s, int t_resolution = 10000);

/// mu(D_r) = I'(log r) / mass_norm with I' the left derivative, taken as the
/// backward difference on the s-grid. Backward differences are attached to
/// cell midpoints and interpolated linearly in log r; the result is clamped
/// to [0, T0 / mass_norm]. Throws std::out_of_range when log r is outside the
/// grid.
double limit_radial_cdf(const TransformResult& transform, double r, double mass_norm = 1.0);

/// log u_a(t) = log p(t + a) + (t + a) log(t + a) - t log t + (1 - a) log(1 - a)
/// on [0, 1 - a], -inf beyond. Requires p finite on [a, 1] and a in (0, 1).
CoefficientProfile derived_profile_u_a(const CoefficientProfile& profile, double a);

enum class ClosedFormCase {
  kKacUnitCircle,     ///< 1{r >= 1}
  kKacA,              ///< a r / ((1 - a)(1 - r)) below 1 - a, then 1
  kKacRescaled,       ///< min(r, 1)
  kEllipticRescaled,  ///< r (sqrt(4 + r^2) - r) / 2
};

double closed_form_cdf(ClosedFormCase which, double r, double a = 0.0);

/// Planar density of the rescaled Kac limit, 1 / (2 pi |z|) on the unit disk.
double kac_rescaled_density(double abs_z);

/// Closed-form Legendre-Fenchel transforms of the named profiles.
///  kac:                s v 0
///  kac-case2(a):       a log(a / (e^-s - 1) + a) + (1 - a) log(1 - a) for s < log(1 - a),
///                      s (1 - a) otherwise
///  kac-case3-rescaled: e^s - 1 for s < 0, s otherwise
///  elliptic-rescaled:  (t_s - 1)/2 - log(1 - t_s)/2, t_s = 2 / (1 + sqrt(1 + 4 e^-2s))
/// Throws std::invalid_argument for kElliptic (no closed form).
double closed_form_transform(ProfileKind kind, double s, double a = 0.0);

/// Limits of the rescaled fixed-degree derivatives:
///   kac:      sum xi_k z^k / k!
///   elliptic: sum xi_k z^k / (k! sqrt((m - k)!))
/// `xi` must have length m + 1.
SampledPolynomial fixed_degree_limit_poly(EnsembleKind kind, int m,
                                          std::span<const std::complex<double>> xi);

}  // namespace rootlaw
