#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "rootlaw/logspace.hpp"

using namespace rootlaw;

TEST(LogFactorial, MatchesExactIntegersThroughTwenty) {
  for (int k = 0; k <= 20; ++k) {
    const double exact = std::log(static_cast<long double>(oracle::factorial(k)));
    EXPECT_NEAR(log_factorial(k), exact, 1e-12 * std::max(1.0, exact)) << "k = " << k;
  }
}

TEST(LogFactorial, StirlingBranchAgreesWithLgamma) {
  for (long long k : {21LL, 25LL, 50LL, 170LL, 1000LL, 4000LL, 100000LL}) {
    const double reference = std::lgamma(static_cast<double>(k) + 1.0);
    EXPECT_NEAR(log_factorial(k), reference, 1e-12 * reference) << "k = " << k;
  }
}

TEST(LogFactorial, RecurrenceHoldsAcrossTableBoundary) {
  for (long long k = 15; k <= 40; ++k) {
    EXPECT_NEAR(log_factorial(k + 1) - log_factorial(k), std::log(static_cast<double>(k + 1)), 1e-12);
  }
}

TEST(LogFactorial, NegativeArgumentThrows) { EXPECT_THROW(log_factorial(-1), std::domain_error); }

TEST(LogBinomial, SmallValuesAndOutOfRange) {
  EXPECT_NEAR(log_binomial(4, 2), std::log(6.0), 1e-14);
  EXPECT_NEAR(log_binomial(10, 3), std::log(120.0), 1e-13);
  EXPECT_EQ(log_binomial(7, 0), 0.0);
  EXPECT_TRUE(is_log_zero(log_binomial(5, 6)));
  EXPECT_TRUE(is_log_zero(log_binomial(5, -1)));
}

TEST(LogBinomial, SymmetricInK) {
  for (int k = 0; k <= 3000; k += 97) EXPECT_DOUBLE_EQ(log_binomial(3000, k), log_binomial(3000, 3000 - k));
}

TEST(Xlogx, ContinuousExtensionAtZero) {
  EXPECT_EQ(xlogx(0.0), 0.0);
  EXPECT_NEAR(xlogx(0.5), 0.5 * std::log(0.5), 1e-16);
  EXPECT_EQ(xlogx(1.0), 0.0);
}

TEST(LogZero, IsAbsorbingUnderAddition) {
  EXPECT_TRUE(is_log_zero(kLogZero + 5.0));
  EXPECT_TRUE(is_log_zero(kLogZero - 1e300));
  EXPECT_FALSE(is_log_zero(-1e300));
}
