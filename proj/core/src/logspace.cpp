#include "rootlaw/logspace.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>

namespace rootlaw {

namespace {

constexpr int kExactLimit = 20;

constexpr std::array<std::uint64_t, kExactLimit + 1> MakeFactorials() {
  std::array<std::uint64_t, kExactLimit + 1> out{};
  out[0] = 1;
  for (int k = 1; k <= kExactLimit; ++k) out[k] = out[k - 1] * k;
  return out;
}

constexpr auto kFactorials = MakeFactorials();

}  // namespace

double log_factorial(long long k) {
  if (k < 0) throw std::domain_error("log_factorial: negative argument");
  if (k <= kExactLimit) {
    return std::log(static_cast<double>(kFactorials[static_cast<std::size_t>(k)]));
  }
  // log Gamma(x + 1) = x log x - x + log(2 pi x)/2 + sum B_2j / (2j(2j-1) x^(2j-1))
  const double x = static_cast<double>(k);
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  const double series =
      inv * (1.0 / 12.0 -
             inv2 * (1.0 / 360.0 -
                     inv2 * (1.0 / 1260.0 - inv2 * (1.0 / 1680.0 - inv2 / 1188.0))));
  return x * std::log(x) - x + 0.5 * std::log(2.0 * std::numbers::pi * x) + series;
}

double log_binomial(long long n, long long k) {
  if (n < 0) throw std::domain_error("log_binomial: negative n");
  if (k < 0 || k > n) return kLogZero;
  const long long lo = std::min(k, n - k);
  return log_factorial(n) - log_factorial(lo) - log_factorial(n - lo);
}

double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace rootlaw
