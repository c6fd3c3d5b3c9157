#include "rootlaw/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rootlaw {

namespace {

constexpr int kLogGridPoints = 10000;
constexpr double kLogGridLo = 1e-3;
constexpr double kLogGridHi = 1e3;

double WrapAngle(double angle) {
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  if (angle < 0.0) angle += kTwoPi;
  return angle >= kTwoPi ? 0.0 : angle;
}

}  // namespace

EmpiricalMeasure empirical_measure(std::span<const std::complex<double>> roots) {
  if (roots.empty()) throw std::invalid_argument("empirical_measure: empty root set");
  EmpiricalMeasure out;
  out.moduli.reserve(roots.size());
  out.angles.reserve(roots.size());
  for (const auto& z : roots) {
    out.moduli.push_back(std::abs(z));
    out.angles.push_back(WrapAngle(std::arg(z)));
  }
  std::sort(out.moduli.begin(), out.moduli.end());
  return out;
}

EmpiricalMeasure empirical_measure(const RootSet& roots) { return empirical_measure(roots.roots); }

EmpiricalMeasure scale_measure(const EmpiricalMeasure& measure, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("scale_measure: h must be positive");
  EmpiricalMeasure out = measure;
  for (double& r : out.moduli) r *= h;
  return out;
}

RadialCDF RadialCDF::empirical(std::vector<double> sorted_moduli) {
  if (sorted_moduli.empty()) throw std::invalid_argument("radial CDF of an empty measure");
  if (!std::is_sorted(sorted_moduli.begin(), sorted_moduli.end())) {
    throw std::invalid_argument("radial CDF: moduli must be sorted");
  }
  RadialCDF out;
  out.kind_ = Kind::kEmpiricalStep;
  out.steps_ = std::move(sorted_moduli);
  out.label_ = "empirical";
  return out;
}

RadialCDF RadialCDF::theoretical(std::function<double(double)> cdf, std::string label) {
  if (!cdf) throw std::invalid_argument("radial CDF: empty function");
  RadialCDF out;
  out.kind_ = Kind::kTheoretical;
  out.cdf_ = std::move(cdf);
  out.label_ = std::move(label);
  return out;
}

double RadialCDF::operator()(double r) const {
  if (kind_ == Kind::kTheoretical) return cdf_(r);
  const auto upper = std::upper_bound(steps_.begin(), steps_.end(), r);
  return static_cast<double>(upper - steps_.begin()) / static_cast<double>(steps_.size());
}

double RadialCDF::left_limit(double r) const {
  if (kind_ == Kind::kTheoretical) return cdf_(r);
  const auto lower = std::lower_bound(steps_.begin(), steps_.end(), r);
  return static_cast<double>(lower - steps_.begin()) / static_cast<double>(steps_.size());
}

RadialCDF radial_cdf(const EmpiricalMeasure& measure) {
  return RadialCDF::empirical(measure.moduli);
}

double ks_distance(const RadialCDF& f, const RadialCDF& g) {
  double worst = 0.0;
  auto probe = [&](double r) {
    worst = std::max(worst, std::abs(f(r) - g(r)));
    worst = std::max(worst, std::abs(f.left_limit(r) - g.left_limit(r)));
  };
  for (const double r : f.steps()) probe(r);
  for (const double r : g.steps()) probe(r);
  if (f.kind() == RadialCDF::Kind::kTheoretical || g.kind() == RadialCDF::Kind::kTheoretical) {
    const double log_lo = std::log(kLogGridLo);
    const double log_step = (std::log(kLogGridHi) - log_lo) / (kLogGridPoints - 1);
    for (int i = 0; i < kLogGridPoints; ++i) probe(std::exp(log_lo + i * log_step));
  }
  return std::min(worst, 1.0);
}

double angular_discrepancy(const EmpiricalMeasure& measure) {
  const std::size_t n = measure.angles.size();
  if (n < 2) throw std::invalid_argument("angular_discrepancy: need at least two points");
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) u[i] = measure.angles[i] / (2.0 * std::numbers::pi);
  std::sort(u.begin(), u.end());
  double d_plus = 0.0;
  double d_minus = 0.0;
  const double count = static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    d_plus = std::max(d_plus, static_cast<double>(i + 1) / count - u[i]);
    d_minus = std::max(d_minus, u[i] - static_cast<double>(i) / count);
  }
  return d_plus + d_minus;
}

double annulus_fraction(const EmpiricalMeasure& measure, double lo, double hi) {
  if (measure.count() == 0) throw std::invalid_argument("annulus_fraction: empty measure");
  const auto first = std::lower_bound(measure.moduli.begin(), measure.moduli.end(), lo);
  const auto last = std::upper_bound(measure.moduli.begin(), measure.moduli.end(), hi);
  const auto inside = last > first ? last - first : 0;
  return static_cast<double>(inside) / static_cast<double>(measure.count());
}

}  // namespace rootlaw
