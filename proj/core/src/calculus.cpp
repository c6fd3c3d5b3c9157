#include "rootlaw/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "rootlaw/logspace.hpp"

namespace rootlaw {

DerivativePlan::DerivativePlan(int degree, int order) : degree_(degree), order_(order) {
  if (degree < 0 || order < 0 || order > degree) {
    throw std::invalid_argument("derivative plan needs 0 <= N_n <= n (n = " +
                                std::to_string(degree) + ", N_n = " + std::to_string(order) + ")");
  }
}

double log_fkn(int k, const DerivativePlan& plan) {
  const int d = plan.result_degree();
  if (k < 0 || k > d) {
    throw std::out_of_range("log_fkn: k = " + std::to_string(k) + " outside [0, " +
                            std::to_string(d) + "]");
  }
  if (k == d || plan.order() == 0) return 0.0;
  return std::min(0.0, log_factorial(k + plan.order()) + log_factorial(d) - log_factorial(k) -
                           log_factorial(plan.degree()));
}

LogCoefficients differentiate(const LogCoefficients& coeffs, const DerivativePlan& plan) {
  if (coeffs.degree() != plan.degree()) {
    throw std::invalid_argument("differentiate: plan degree " + std::to_string(plan.degree()) +
                                " does not match coefficient degree " +
                                std::to_string(coeffs.degree()));
  }
  const int d = plan.result_degree();
  LogCoefficients out;
  out.ensemble_label = coeffs.ensemble_label;
  out.log_mag.resize(static_cast<std::size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) {
    out.log_mag[k] = coeffs.log_mag[k + plan.order()] + log_fkn(k, plan);
  }
  return out;
}

LogCoefficients rescale(const LogCoefficients& coeffs, double log_h) {
  LogCoefficients out = coeffs;
  if (log_h == 0.0) return out;
  const int d = coeffs.degree();
  for (int k = 0; k <= d; ++k) out.log_mag[k] += (d - k) * log_h;
  return out;
}

double recommended_rescale(EnsembleKind kind, const DerivativePlan& plan, bool fixed_degree) {
  const double n = plan.degree();
  const int d = plan.result_degree();
  if (d < 1) throw std::invalid_argument("recommended_rescale: derivative has degree 0");
  const double log_factor = fixed_degree ? std::log(n) : std::log(n / d);
  switch (kind) {
    case EnsembleKind::kKac:
      return log_factor;
    case EnsembleKind::kElliptic:
      return 0.5 * log_factor;
    default:
      throw std::invalid_argument("recommended_rescale: only kac and elliptic have a known factor");
  }
}

}  // namespace rootlaw
