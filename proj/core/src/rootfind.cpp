#include "rootlaw/rootfind.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "rootlaw/logspace.hpp"

namespace rootlaw {

namespace {

using real = long double;
using cplx = std::complex<real>;

// Coefficients c_0..c_d of the polynomial left after trimming, divided by
// exp(max log_mag) so their sizes are those of the xi_k, plus the number of
// exact zero roots that were split off.
struct WorkPolynomial {
  std::vector<cplx> coeffs;
  std::vector<double> log_abs;  // log |c_k| before scaling, kLogZero for zeros
  int zero_roots = 0;

  int degree() const { return static_cast<int>(coeffs.size()) - 1; }
};

// xi_k exp(log_mag_k - shift) in extended precision. Keeping xi_k as a factor
// (instead of folding log |xi_k| into the exponent) reproduces explicitly
// given coefficients bit for bit.
std::vector<cplx> ScaledCoefficients(const SampledPolynomial& poly, std::size_t first,
                                     std::size_t last, std::vector<double>* log_abs) {
  double shift = kLogZero;
  for (std::size_t k = first; k <= last; ++k) {
    if (poly.xi[k] != 0.0) shift = std::max(shift, poly.log_mag[k]);
  }
  std::vector<cplx> out(last - first + 1);
  for (std::size_t k = first; k <= last; ++k) {
    const auto& xi = poly.xi[k];
    if (xi == 0.0 || is_log_zero(poly.log_mag[k])) continue;
    out[k - first] = cplx(xi.real(), xi.imag()) *
                     std::exp(static_cast<real>(poly.log_mag[k]) - static_cast<real>(shift));
  }
  if (log_abs != nullptr) {
    log_abs->clear();
    for (std::size_t k = first; k <= last; ++k) {
      const double magnitude = std::abs(poly.xi[k]);
      log_abs->push_back(magnitude == 0.0 ? kLogZero : poly.log_mag[k] + std::log(magnitude));
    }
  }
  return out;
}

WorkPolynomial Materialize(const SampledPolynomial& poly) {
  if (poly.log_mag.size() != poly.xi.size()) {
    throw std::invalid_argument("sampled polynomial: log_mag and xi lengths differ");
  }
  std::vector<double> log_abs(poly.log_mag.size());
  for (std::size_t k = 0; k < log_abs.size(); ++k) {
    const double magnitude = std::abs(poly.xi[k]);
    log_abs[k] = magnitude == 0.0 ? kLogZero : poly.log_mag[k] + std::log(magnitude);
    if (std::isnan(log_abs[k])) throw std::invalid_argument("sampled polynomial has NaN entries");
  }
  int top = static_cast<int>(log_abs.size()) - 1;
  while (top >= 0 && is_log_zero(log_abs[top])) --top;
  int bottom = 0;
  while (bottom <= top && is_log_zero(log_abs[bottom])) ++bottom;
  if (top < 1) throw std::invalid_argument("find_roots: polynomial has degree 0");

  WorkPolynomial out;
  out.zero_roots = bottom;
  out.coeffs = ScaledCoefficients(poly, bottom, top, &out.log_abs);
  return out;
}

// Error-free transformations for compensated Horner.
void TwoSum(real a, real b, real& sum, real& err) {
  sum = a + b;
  const real z = sum - a;
  err = (a - (sum - z)) + (b - z);
}

// Dekker's split; 2^32 + 1 halves the 64-bit long double significand. Avoids
// fmal, which is a software routine on x87.
void Split(real a, real& hi, real& lo) {
  constexpr real kSplitter = 4294967297.0L;
  const real t = kSplitter * a;
  hi = t - (t - a);
  lo = a - hi;
}

void TwoProduct(real a, real b, real& product, real& err) {
  product = a * b;
  real a_hi, a_lo, b_hi, b_lo;
  Split(a, a_hi, a_lo);
  Split(b, b_hi, b_lo);
  err = ((a_hi * b_hi - product) + a_hi * b_lo + a_lo * b_hi) + a_lo * b_lo;
}

// Plain complex product and quotient. std::complex routes these through the
// Annex G helpers (__mulxc3, __divxc3) that dominate the O(d^2) sweeps; every
// operand here is finite.
cplx Mul(const cplx& a, const cplx& b) {
  return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

cplx Div(const cplx& a, const cplx& b) {
  const real scale = 1.0L / (b.real() * b.real() + b.imag() * b.imag());
  return {(a.real() * b.real() + a.imag() * b.imag()) * scale,
          (a.imag() * b.real() - a.real() * b.imag()) * scale};
}

cplx CompensatedHorner(std::span<const cplx> coeffs, bool reversed, cplx z) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  auto coeff = [&](int k) { return reversed ? coeffs[d - k] : coeffs[k]; };
  cplx acc = coeff(d);
  cplx correction(0.0L, 0.0L);
  for (int k = d - 1; k >= 0; --k) {
    real p1, e1, p2, e2, s1, e3, p3, e4, p4, e5, s2, e6;
    TwoProduct(acc.real(), z.real(), p1, e1);
    TwoProduct(-acc.imag(), z.imag(), p2, e2);
    TwoSum(p1, p2, s1, e3);
    TwoProduct(acc.real(), z.imag(), p3, e4);
    TwoProduct(acc.imag(), z.real(), p4, e5);
    TwoSum(p3, p4, s2, e6);
    const cplx c = coeff(k);
    real r1, f1, r2, f2;
    TwoSum(s1, c.real(), r1, f1);
    TwoSum(s2, c.imag(), r2, f2);
    acc = cplx(r1, r2);
    correction = Mul(correction, z) + cplx(e1 + e2 + e3 + f1, e4 + e5 + e6 + f2);
  }
  return acc + correction;
}

real AbsHorner(std::span<const cplx> coeffs, bool reversed, real radius) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  real acc = 0.0L;
  for (int k = d; k >= 0; --k) acc = acc * radius + std::abs(reversed ? coeffs[d - k] : coeffs[k]);
  return acc;
}

double NormalizedResidual(std::span<const cplx> coeffs, std::complex<double> z_in) {
  const cplx z(z_in.real(), z_in.imag());
  const real modulus = std::abs(z);
  const bool reversed = modulus > 1.0L;
  const cplx arg = reversed ? Div(cplx(1.0L, 0.0L), z) : z;
  const real numerator = std::abs(CompensatedHorner(coeffs, reversed, arg));
  if (numerator == 0.0L) return 0.0;
  const real denominator = AbsHorner(coeffs, reversed, std::abs(arg));
  return static_cast<double>(numerator / denominator);
}

// p'(z) / p(z); returns false when z is an exact root.
bool LogDerivative(std::span<const cplx> coeffs, std::complex<double> z_in, cplx& out) {
  const int d = static_cast<int>(coeffs.size()) - 1;
  const cplx z(z_in.real(), z_in.imag());
  if (std::abs(z) <= 1.0L) {
    cplx p = coeffs[d];
    cplx dp(0.0L, 0.0L);
    for (int k = d - 1; k >= 0; --k) {
      dp = Mul(dp, z) + p;
      p = Mul(p, z) + coeffs[k];
    }
    if (p == cplx(0.0L, 0.0L)) return false;
    out = Div(dp, p);
    return true;
  }
  // p(z) = z^d q(1/z) with q the reversed polynomial.
  const cplx w = Div(cplx(1.0L, 0.0L), z);
  cplx q = coeffs[0];
  cplx dq(0.0L, 0.0L);
  for (int k = 1; k <= d; ++k) {
    dq = Mul(dq, w) + q;
    q = Mul(q, w) + coeffs[k];
  }
  if (q == cplx(0.0L, 0.0L)) return false;
  out = Mul(w, cplx(static_cast<real>(d), 0.0L) - Mul(w, Div(dq, q)));
  return true;
}

// Starting points from the upper convex hull of (k, log|c_k|).
std::vector<std::complex<double>> InitialGuesses(std::span<const double> log_abs, double offset,
                                                 double radius_scale) {
  std::vector<int> hull;
  for (int k = 0; k < static_cast<int>(log_abs.size()); ++k) {
    if (is_log_zero(log_abs[k])) continue;
    while (hull.size() >= 2) {
      const int i = hull[hull.size() - 2];
      const int j = hull.back();
      // Drop j unless it lies strictly above the chord from i to k.
      const double cross = (j - i) * (log_abs[k] - log_abs[i]) - (k - i) * (log_abs[j] - log_abs[i]);
      if (cross >= 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(k);
  }
  const int d = static_cast<int>(log_abs.size()) - 1;
  std::vector<std::complex<double>> out;
  out.reserve(d);
  for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
    const int lo = hull[e];
    const int hi = hull[e + 1];
    const int count = hi - lo;
    const double radius = radius_scale * std::exp((log_abs[lo] - log_abs[hi]) / count);
    for (int j = 0; j < count; ++j) {
      const double angle = 2.0 * std::numbers::pi * (static_cast<double>(j) / count +
                                                     static_cast<double>(lo) / d) + offset;
      out.push_back(std::polar(radius, angle));
    }
  }
  return out;
}

// Jacobi-style Aberth sweeps: every correction in a sweep reads the previous
// sweep's root vector. Returns the number of sweeps performed.
int AberthIterate(std::span<const cplx> coeffs, std::vector<std::complex<double>>& z,
                  std::vector<char>& done, const RootFindOptions& options) {
  const std::size_t d = z.size();
  std::vector<std::complex<double>> step(d);
  std::vector<char> valid(d);
  int sweep = 0;
  while (sweep < options.max_iterations &&
         std::find(done.begin(), done.end(), 0) != done.end()) {
    ++sweep;
    for (std::size_t i = 0; i < d; ++i) {
      valid[i] = 0;
      if (done[i]) continue;
      cplx log_derivative;
      if (!LogDerivative(coeffs, z[i], log_derivative)) {
        step[i] = 0.0;
        valid[i] = 1;
        continue;
      }
      double rep_re = 0.0;
      double rep_im = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        if (j == i) continue;
        const double dx = z[i].real() - z[j].real();
        const double dy = z[i].imag() - z[j].imag();
        const double inv = 1.0 / (dx * dx + dy * dy);
        rep_re += dx * inv;
        rep_im -= dy * inv;
      }
      const cplx denom = log_derivative - cplx(rep_re, rep_im);
      const cplx delta = Div(cplx(1.0L, 0.0L), denom);
      step[i] = {static_cast<double>(delta.real()), static_cast<double>(delta.imag())};
      valid[i] = std::isfinite(step[i].real()) && std::isfinite(step[i].imag());
    }
    for (std::size_t i = 0; i < d; ++i) {
      if (done[i] || !valid[i]) continue;
      z[i] -= step[i];
      if (std::abs(step[i]) <= options.tol * (1.0 + std::abs(z[i]))) done[i] = 1;
    }
  }
  return sweep;
}

}  // namespace

bool RootSet::all_converged() const {
  return std::all_of(converged.begin(), converged.end(), [](bool c) { return c; });
}

RootSet find_roots(const SampledPolynomial& poly, double tol) {
  RootFindOptions options;
  options.tol = tol;
  options.residual_tol = std::max(options.residual_tol, tol);
  return find_roots(poly, options);
}

RootSet find_roots(const SampledPolynomial& poly, const RootFindOptions& options) {
  if (!(options.tol > 0.0) || options.max_iterations < 1) {
    throw std::invalid_argument("find_roots: invalid options");
  }
  const WorkPolynomial work = Materialize(poly);
  const int d = work.degree();

  RootSet out;
  out.degree = d + work.zero_roots;

  std::vector<std::complex<double>> z;
  std::vector<char> done(d, 0);
  if (d == 1) {
    const cplx root = -work.coeffs[0] / work.coeffs[1];
    z.emplace_back(static_cast<double>(root.real()), static_cast<double>(root.imag()));
    done[0] = 1;
  } else {
    z = InitialGuesses(work.log_abs, 0.7, 1.0);
    out.iterations = AberthIterate(work.coeffs, z, done, options);
    if (std::find(done.begin(), done.end(), 0) != done.end()) {
      // Restart the stragglers from perturbed positions; converged roots stay
      // fixed and keep repelling.
      out.restarted = true;
      for (int i = 0; i < d; ++i) {
        if (done[i]) continue;
        const double bump = 1.0 + 1e-3 * ((i % 7) + 1);
        z[i] = z[i] * std::polar(bump, 0.1 * (i + 1));
        if (!std::isfinite(z[i].real()) || !std::isfinite(z[i].imag())) {
          z[i] = std::polar(1.0, 2.0 * std::numbers::pi * i / d + 0.37);
        }
      }
      out.iterations += AberthIterate(work.coeffs, z, done, options);
    }
  }

  out.roots.reserve(out.degree);
  out.converged.reserve(out.degree);
  out.residuals.reserve(out.degree);
  for (int i = 0; i < work.zero_roots; ++i) {
    out.roots.emplace_back(0.0, 0.0);
    out.converged.push_back(true);
    out.residuals.push_back(0.0);
  }
  for (int i = 0; i < d; ++i) {
    const double residual = NormalizedResidual(work.coeffs, z[i]);
    out.roots.push_back(z[i]);
    out.residuals.push_back(residual);
    out.converged.push_back(done[i] && residual <= options.residual_tol);
  }

  std::vector<double> sorted = out.residuals;
  std::sort(sorted.begin(), sorted.end());
  out.residual_stats.max = sorted.back();
  const std::size_t mid = sorted.size() / 2;
  out.residual_stats.median =
      sorted.size() % 2 == 1 ? sorted[mid] : 0.5 * (sorted[mid - 1] + sorted[mid]);

  if (!out.all_converged()) {
    const auto failures = std::count(out.converged.begin(), out.converged.end(), false);
    throw RootFindError("find_roots: " + std::to_string(failures) + " of " +
                            std::to_string(out.degree) + " roots did not converge",
                        std::move(out));
  }
  return out;
}

double root_residual(const SampledPolynomial& poly, std::complex<double> z) {
  if (poly.log_mag.size() != poly.xi.size() || poly.log_mag.empty()) {
    throw std::invalid_argument("root_residual: malformed polynomial");
  }
  const std::vector<cplx> coeffs = ScaledCoefficients(poly, 0, poly.log_mag.size() - 1, nullptr);
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const cplx& c) { return c == cplx(0.0L, 0.0L); })) {
    return 0.0;
  }
  if (z == std::complex<double>(0.0, 0.0)) {
    return coeffs[0] == cplx(0.0L, 0.0L) ? 0.0 : 1.0;
  }
  return NormalizedResidual(coeffs, z);
}

RootMatching match_roots(std::span<const std::complex<double>> lhs,
                         std::span<const std::complex<double>> rhs) {
  if (lhs.size() != rhs.size()) throw std::invalid_argument("match_roots: sizes differ");
  const int m = static_cast<int>(lhs.size());
  RootMatching out;
  out.assignment.assign(m, -1);
  if (m == 0) return out;

  // Shortest augmenting path with potentials, 1-based rows/columns.
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> match_col(m + 1, 0), way(m + 1, 0);
  for (int row = 1; row <= m; ++row) {
    match_col[0] = row;
    int col0 = 0;
    std::vector<double> min_slack(m + 1, kInf);
    std::vector<char> used(m + 1, 0);
    do {
      used[col0] = 1;
      const int row0 = match_col[col0];
      double delta = kInf;
      int col1 = 0;
      for (int col = 1; col <= m; ++col) {
        if (used[col]) continue;
        const double cost = std::abs(lhs[row0 - 1] - rhs[col - 1]) - u[row0] - v[col];
        if (cost < min_slack[col]) {
          min_slack[col] = cost;
          way[col] = col0;
        }
        if (min_slack[col] < delta) {
          delta = min_slack[col];
          col1 = col;
        }
      }
      for (int col = 0; col <= m; ++col) {
        if (used[col]) {
          u[match_col[col]] += delta;
          v[col] -= delta;
        } else {
          min_slack[col] -= delta;
        }
      }
      col0 = col1;
    } while (match_col[col0] != 0);
    do {
      const int col1 = way[col0];
      match_col[col0] = match_col[col1];
      col0 = col1;
    } while (col0 != 0);
  }
  for (int col = 1; col <= m; ++col) out.assignment[match_col[col] - 1] = col - 1;
  for (int i = 0; i < m; ++i) {
    const double distance = std::abs(lhs[i] - rhs[out.assignment[i]]);
    out.max_distance = std::max(out.max_distance, distance);
    out.total_distance += distance;
  }
  return out;
}

}  // namespace rootlaw
