#pragma once

#include <limits>

namespace rootlaw {

/// Log of an exact zero. IEEE -inf is absorbing under addition with finite
/// values, which is the only arithmetic applied to log-magnitudes here.
inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

inline bool is_log_zero(double x) { return x == kLogZero; }

/// log(k!) for k >= 0. Exact table up to 20!, Stirling series beyond.
/// Thread-safe (does not touch the global signgam used by ::lgamma).
double log_factorial(long long k);

/// log C(n, k); kLogZero when k is outside [0, n].
double log_binomial(long long n, long long k);

/// x log x with the continuous extension 0 at x = 0.
double xlogx(double x);

}  // namespace rootlaw
