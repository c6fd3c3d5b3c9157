#pragma once

// Empirical measures of zeros and the statistics used to compare them with
// rotationally invariant limit laws.

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "rootlaw/rootfind.hpp"

namespace rootlaw {

struct EmpiricalMeasure {
  std::vector<double> moduli;  ///< sorted ascending
  std::vector<double> angles;  ///< arg z in [0, 2 pi), in root order

  std::size_t count() const { return moduli.size(); }
};

/// Throws std::invalid_argument on an empty root set.
EmpiricalMeasure empirical_measure(const RootSet& roots);
EmpiricalMeasure empirical_measure(std::span<const std::complex<double>> roots);

/// Push-forward under z -> h z: moduli scale by h, angles are unchanged.
EmpiricalMeasure scale_measure(const EmpiricalMeasure& measure, double h);

/// r -> mass of the closed disk of radius r.
class RadialCDF {
 public:
  enum class Kind { kEmpiricalStep, kTheoretical };

  /// Right-continuous step function of the given (sorted) moduli.
  static RadialCDF empirical(std::vector<double> sorted_moduli);
  /// A continuous, nondecreasing curve.
  static RadialCDF theoretical(std::function<double(double)> cdf, std::string label = {});

  double operator()(double r) const;
  /// lim_{x -> r-} F(x); equals F(r) for theoretical curves.
  double left_limit(double r) const;

  Kind kind() const { return kind_; }
  const std::vector<double>& steps() const { return steps_; }
  const std::string& label() const { return label_; }

 private:
  Kind kind_ = Kind::kTheoretical;
  std::vector<double> steps_;
  std::function<double(double)> cdf_;
  std::string label_;
};

/// F(r) = #{|z| <= r} / count. Zero roots count from r = 0.
RadialCDF radial_cdf(const EmpiricalMeasure& measure);

/// sup_r |F(r) - G(r)|, checked on both sides of every jump of an empirical
/// argument and, when a theoretical curve is involved, on a 10^4-point
/// log-spaced grid over [1e-3, 1e3].
double ks_distance(const RadialCDF& f, const RadialCDF& g);

/// Kuiper statistic V = D+ + D- of angle / 2 pi against the uniform law on
/// [0, 1). Invariant under global rotation. Needs at least two points.
double angular_discrepancy(const EmpiricalMeasure& measure);

/// Fraction of points whose modulus lies in [lo, hi].
double annulus_fraction(const EmpiricalMeasure& measure, double lo, double hi);

}  // namespace rootlaw
