#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussbayes/errors.hpp"
#include "gaussbayes/specfun.hpp"

using namespace gaussbayes;

namespace {

// Hankel expansion of e^{-x} I_n(x) for large x.
double scaled_asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 40; ++k) {
    term *= -(mu - (2 * k - 1) * (2 * k - 1)) / (k * 8.0 * x);
    sum += term;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace

TEST(BesselI, MatchesStdLibrary) {
  for (int n = 0; n <= 30; ++n) {
    for (double x : {0.01, 0.5, 1.0, 4.0, 12.5, 24.9, 25.1, 40.0, 100.0, 300.0}) {
      const double want = std::cyl_bessel_i(static_cast<double>(n), x);
      if (want < 1e-280) continue;
      EXPECT_NEAR(bessel_i(n, x), want, 1e-12 * want) << "n=" << n << " x=" << x;
    }
  }
}

TEST(BesselI, SmallArgumentLimits) {
  EXPECT_DOUBLE_EQ(bessel_i(0, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(bessel_i(3, 0.0), 0.0);
  EXPECT_NEAR(bessel_i(2, 1e-4), 1e-8 / 8.0 * (1.0 + 1e-8 / 12.0), 1e-14 * 1.25e-9);
}

TEST(BesselI, NegativeOrderAndArgument) {
  for (int n = 1; n <= 12; ++n) {
    EXPECT_DOUBLE_EQ(bessel_i(-n, 3.7), bessel_i(n, 3.7));
    const double sign = n % 2 ? -1.0 : 1.0;
    EXPECT_DOUBLE_EQ(bessel_i(n, -3.7), sign * bessel_i(n, 3.7));
  }
}

TEST(BesselI, ScaledLargeArgument) {
  for (int n : {0, 1, 5, 20}) {
    for (double x : {800.0, 2000.0, 1e5}) {
      const double want = scaled_asymptotic(n, x);
      EXPECT_NEAR(bessel_i_log_scaled(n, x), want, 1e-12 * want) << "n=" << n << " x=" << x;
    }
  }
}

TEST(BesselI, OverflowIsRangeError) {
  EXPECT_THROW(bessel_i(0, 800.0), RangeError);
  EXPECT_NO_THROW(bessel_i_log_scaled(0, 800.0));
}

TEST(BesselI, SequenceMatchesSingleOrders) {
  for (double x : {-7.5, 0.3, 2.0, 30.0, 450.0}) {
    const auto seq = bessel_i_scaled_sequence(60, x);
    ASSERT_EQ(seq.size(), 61u);
    for (int k = 0; k <= 60; ++k) {
      const double want = bessel_i_log_scaled(k, x);
      EXPECT_NEAR(seq[k], want, 1e-13 * std::fabs(want) + 1e-300) << "k=" << k << " x=" << x;
    }
  }
}

TEST(BesselI, SequenceAtZero) {
  const auto seq = bessel_i_scaled_sequence(4, 0.0);
  EXPECT_EQ(seq[0], 1.0);
  for (int k = 1; k <= 4; ++k) EXPECT_EQ(seq[k], 0.0);
}

TEST(BesselI, SumRule) {
  // I_0(x) + 2 sum_k I_k(x) = e^x
  for (double x : {0.7, 9.0, 60.0}) {
    const auto seq = bessel_i_scaled_sequence(200, x);
    double s = seq[0];
    for (int k = 1; k <= 200; ++k) s += 2.0 * seq[k];
    EXPECT_NEAR(s, 1.0, 1e-13);
  }
}

TEST(Hyp0F1, Examples) {
  EXPECT_DOUBLE_EQ(hyp0f1(2.0, 0.0), 1.0);
  EXPECT_NEAR(hyp0f1(2.0, 1.0), std::cyl_bessel_i(1.0, 2.0), 1e-14);
  EXPECT_NEAR(hyp0f1(2.0, 4.0), std::cyl_bessel_i(1.0, 4.0) / 2.0, 1e-13);
}

TEST(Hyp0F1, CoshIdentity) {
  // 0F1(;1/2; z^2/4) = cosh z
  for (double z : {0.1, 1.0, 5.0, 15.0}) {
    EXPECT_NEAR(hyp0f1(0.5, z * z / 4.0), std::cosh(z), 1e-13 * std::cosh(z));
  }
}

TEST(Hyp0F1, PolesRejected) {
  EXPECT_THROW(hyp0f1(0.0, 1.0), DomainError);
  EXPECT_THROW(hyp0f1(-2.0, 1.0), DomainError);
}

TEST(Hyp0F1, TruncationReported) {
  SeriesControl ctl;
  ctl.max_terms = 3;
  EXPECT_THROW(hyp0f1(2.0, 50.0, ctl), TruncationError);
}

TEST(GammaFn, Values) {
  EXPECT_NEAR(gamma_fn(5.0), 24.0, 1e-12);
  EXPECT_NEAR(gamma_fn(0.5), std::sqrt(std::numbers::pi), 1e-14);
  EXPECT_NEAR(gamma_fn(-0.5), -2.0 * std::sqrt(std::numbers::pi), 1e-13);
  EXPECT_THROW(gamma_fn(0.0), DomainError);
  EXPECT_THROW(gamma_fn(-3.0), DomainError);
}

TEST(SeriesControl, Validation) {
  SeriesControl ctl;
  ctl.max_terms = 0;
  EXPECT_THROW(ctl.validate(), DomainError);
  ctl = {};
  ctl.rel_tol = -1.0;
  EXPECT_THROW(ctl.validate(), DomainError);
}
