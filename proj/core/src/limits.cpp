#include "rootlaw/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "rootlaw/logspace.hpp"

namespace rootlaw {

namespace {

constexpr int kGoldenIterations = 40;

double GoldenMaximize(const std::function<double(double)>& g, double lo, double hi,
                      double& best_t) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - inv_phi * (hi - lo);
  double x2 = lo + inv_phi * (hi - lo);
  double g1 = g(x1);
  double g2 = g(x2);
  for (int i = 0; i < kGoldenIterations; ++i) {
    if (g1 < g2) {
      lo = x1;
      x1 = x2;
      g1 = g2;
      x2 = lo + inv_phi * (hi - lo);
      g2 = g(x2);
    } else {
      hi = x2;
      x2 = x1;
      g2 = g1;
      x1 = hi - inv_phi * (hi - lo);
      g1 = g(x1);
    }
  }
  best_t = g1 >= g2 ? x1 : x2;
  return std::max(g1, g2);
}

struct TabulatedProfile {
  double step = 0.0;
  std::vector<double> t;
  std::vector<double> log_p;
};

TabulatedProfile Tabulate(const CoefficientProfile& profile, int t_resolution) {
  if (t_resolution < 1000) {
    throw std::invalid_argument("legendre_fenchel: t_resolution must be at least 1000");
  }
  TabulatedProfile out;
  const double end = profile.support_end();
  out.step = end / t_resolution;
  out.t.resize(t_resolution + 1);
  out.log_p.resize(t_resolution + 1);
  bool any_finite = false;
  for (int i = 0; i <= t_resolution; ++i) {
    out.t[i] = i == t_resolution ? end : i * out.step;
    out.log_p[i] = profile(out.t[i]);
    any_finite = any_finite || std::isfinite(out.log_p[i]);
  }
  if (!any_finite) throw std::invalid_argument("legendre_fenchel: profile has empty support");
  return out;
}

double TransformAt(const CoefficientProfile& profile, const TabulatedProfile& table, double s) {
  double best = kLogZero;
  std::size_t argmax = 0;
  for (std::size_t i = 0; i < table.t.size(); ++i) {
    if (!std::isfinite(table.log_p[i])) continue;
    const double value = s * table.t[i] + table.log_p[i];
    if (value > best) {
      best = value;
      argmax = i;
    }
  }
  const double lo = argmax == 0 ? table.t.front() : table.t[argmax - 1];
  const double hi = argmax + 1 == table.t.size() ? table.t.back() : table.t[argmax + 1];
  double refined_t = table.t[argmax];
  const double refined = GoldenMaximize(
      [&](double t) {
        const double lp = profile(t);
        return std::isfinite(lp) ? s * t + lp : kLogZero;
      },
      lo, hi, refined_t);
  return std::max(best, refined);
}

}  // namespace

std::vector<double> default_s_grid() {
  constexpr int kPoints = 2001;
  std::vector<double> grid(kPoints);
  for (int i = 0; i < kPoints; ++i) grid[i] = -8.0 + 16.0 * i / (kPoints - 1);
  return grid;
}

TransformResult legendre_fenchel(const CoefficientProfile& profile, std::span<const double> s_grid,
                                 int t_resolution) {
  if (s_grid.size() < 2) throw std::invalid_argument("legendre_fenchel: s-grid too small");
  for (std::size_t i = 1; i < s_grid.size(); ++i) {
    if (!(s_grid[i] > s_grid[i - 1])) {
      throw std::invalid_argument("legendre_fenchel: s-grid must be strictly increasing");
    }
  }
  const TabulatedProfile table = Tabulate(profile, t_resolution);
  TransformResult out;
  out.s_grid.assign(s_grid.begin(), s_grid.end());
  out.values.reserve(s_grid.size());
  for (const double s : s_grid) out.values.push_back(TransformAt(profile, table, s));
  out.support_end = profile.support_end();
  out.profile_label = profile.label();
  return out;
}

TransformResult legendre_fenchel(const CoefficientProfile& profile) {
  const auto grid = default_s_grid();
  return legendre_fenchel(profile, grid);
}

double legendre_fenchel_at(const CoefficientProfile& profile, double s, int t_resolution) {
  return TransformAt(profile, Tabulate(profile, t_resolution), s);
}

double limit_radial_cdf(const TransformResult& transform, double r, double mass_norm) {
  if (!(mass_norm > 0.0)) throw std::invalid_argument("limit_radial_cdf: mass_norm must be positive");
  const auto& s = transform.s_grid;
  const auto& values = transform.values;
  if (s.size() < 3 || values.size() != s.size()) {
    throw std::invalid_argument("limit_radial_cdf: malformed transform");
  }
  if (!(r > 0.0)) throw std::out_of_range("limit_radial_cdf: r must be positive");
  const double x = std::log(r);
  if (x < s.front() || x > s.back()) {
    std::ostringstream msg;
    msg << "limit_radial_cdf: r = " << r << " outside [" << std::exp(s.front()) << ", "
        << std::exp(s.back()) << "]";
    throw std::out_of_range(msg.str());
  }
  auto slope = [&](std::size_t j) { return (values[j] - values[j - 1]) / (s[j] - s[j - 1]); };
  auto midpoint = [&](std::size_t j) { return 0.5 * (s[j] + s[j - 1]); };

  double derivative;
  const std::size_t last = s.size() - 1;
  if (x <= midpoint(1)) {
    derivative = slope(1);
  } else if (x >= midpoint(last)) {
    derivative = slope(last);
  } else {
    // First cell whose midpoint is >= x; x lies between midpoints j-1 and j.
    std::size_t j = static_cast<std::size_t>(
        std::lower_bound(s.begin(), s.end(), x) - s.begin());
    j = std::clamp<std::size_t>(j, 1, last);
    if (midpoint(j) < x) ++j;
    const double m0 = midpoint(j - 1);
    const double m1 = midpoint(j);
    const double w = (x - m0) / (m1 - m0);
    derivative = (1.0 - w) * slope(j - 1) + w * slope(j);
  }
  const double upper = transform.support_end / mass_norm;
  return std::clamp(derivative / mass_norm, 0.0, upper);
}

CoefficientProfile derived_profile_u_a(const CoefficientProfile& profile, double a) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("derived_profile_u_a: a must lie in (0, 1)");
  if (profile.support_end() < 1.0) {
    throw std::invalid_argument("derived_profile_u_a: profile must be finite on [a, 1]");
  }
  for (int i = 0; i <= 100; ++i) {
    if (!std::isfinite(profile(a + (1.0 - a) * i / 100.0))) {
      throw std::invalid_argument("derived_profile_u_a: profile must be finite on [a, 1]");
    }
  }
  std::ostringstream label;
  label << "u_a(" << profile.label() << ", " << a << ")";
  return {[profile, a](double t) {
            return profile(t + a) + xlogx(t + a) - xlogx(t) + xlogx(1.0 - a);
          },
          1.0 - a, label.str()};
}

double closed_form_cdf(ClosedFormCase which, double r, double a) {
  if (!(r >= 0.0)) throw std::invalid_argument("closed_form_cdf: r must be nonnegative");
  switch (which) {
    case ClosedFormCase::kKacUnitCircle:
      return r >= 1.0 ? 1.0 : 0.0;
    case ClosedFormCase::kKacA:
      if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("closed_form_cdf: a must lie in (0, 1)");
      return r >= 1.0 - a ? 1.0 : a * r / ((1.0 - a) * (1.0 - r));
    case ClosedFormCase::kKacRescaled:
      return std::min(r, 1.0);
    case ClosedFormCase::kEllipticRescaled:
      // r (sqrt(4 + r^2) - r) / 2 without cancellation at large r.
      return 2.0 * r / (std::sqrt(4.0 + r * r) + r);
  }
  throw std::invalid_argument("closed_form_cdf: unknown case");
}

double kac_rescaled_density(double abs_z) {
  if (!(abs_z > 0.0)) throw std::invalid_argument("kac_rescaled_density: |z| must be positive");
  return abs_z <= 1.0 ? 1.0 / (2.0 * std::numbers::pi * abs_z) : 0.0;
}

double closed_form_transform(ProfileKind kind, double s, double a) {
  switch (kind) {
    case ProfileKind::kKac:
      return std::max(s, 0.0);
    case ProfileKind::kKacCase2:
      if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("closed_form_transform: a in (0, 1)");
      if (s < std::log(1.0 - a)) {
        return a * std::log(a / std::expm1(-s) + a) + (1.0 - a) * std::log(1.0 - a);
      }
      return s * (1.0 - a);
    case ProfileKind::kKacCase3Rescaled:
      return s < 0.0 ? std::expm1(s) : s;
    case ProfileKind::kEllipticRescaled: {
      const double t = 2.0 / (1.0 + std::sqrt(1.0 + 4.0 * std::exp(-2.0 * s)));
      return 0.5 * (t - 1.0) - 0.5 * std::log1p(-t);
    }
    case ProfileKind::kElliptic:
      break;
  }
  throw std::invalid_argument("closed_form_transform: no closed form for this profile");
}

SampledPolynomial fixed_degree_limit_poly(EnsembleKind kind, int m,
                                          std::span<const std::complex<double>> xi) {
  if (m < 1) throw std::invalid_argument("fixed_degree_limit_poly: m must be at least 1");
  if (xi.size() != static_cast<std::size_t>(m) + 1) {
    throw std::invalid_argument("fixed_degree_limit_poly: xi must have length m + 1");
  }
  if (kind != EnsembleKind::kKac && kind != EnsembleKind::kElliptic) {
    throw std::invalid_argument("fixed_degree_limit_poly: only kac and elliptic");
  }
  SampledPolynomial out;
  out.xi.assign(xi.begin(), xi.end());
  out.log_mag.resize(static_cast<std::size_t>(m) + 1);
  for (int k = 0; k <= m; ++k) {
    out.log_mag[k] = -log_factorial(k);
    if (kind == EnsembleKind::kElliptic) out.log_mag[k] -= 0.5 * log_factorial(m - k);
  }
  return out;
}

}  // namespace rootlaw
