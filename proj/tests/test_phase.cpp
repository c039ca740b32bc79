#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussbayes/phase.hpp"
#include "gaussbayes/quadrature.hpp"

using namespace gaussbayes;
using std::numbers::pi;

namespace {

double theta_average(const std::function<double(double)>& f, double lo, double hi) {
  return romberg(f, lo, hi, 1e-13, 1e-300, 25).value / (hi - lo);
}

// Posterior on a fine circle grid built directly from the likelihood.
GridDistribution sh_grid_posterior(double alpha, double r, std::complex<double> beta) {
  return GridDistribution::tabulate(Support::circle(-pi, pi), 4096,
                                    [&](double t) { return sh_likelihood(alpha, r, beta, t); });
}

}  // namespace

TEST(PhaseCoherent, ClosedForm) {
  for (double a2 : {0.5, 1.0, 2.0, 5.0})
    EXPECT_NEAR(ch_avg_variance(std::sqrt(a2)), (1 - std::exp(-a2)) / (2 * a2), 1e-15);
  EXPECT_NEAR(ch_avg_variance(1e-6), 0.5, 1e-12);
  EXPECT_DOUBLE_EQ(ch_avg_variance(0.0), 0.5);
}

TEST(PhaseCoherent, PosteriorVarianceMatchesGrid) {
  for (double b : {0.1, 0.9, 2.5}) {
    const auto post = ch_posterior(1.3, {b, 0.0}, 4096);
    const auto cm = circular_mean(post);
    EXPECT_NEAR(ch_vpost(1.3, b), variance_circular(post, cm.value), 1e-12) << b;
  }
}

TEST(PhaseCoherent, VpostLargeArgument) {
  // x = 2 alpha |beta| = 800 overflows I_n; V -> 1/x asymptotically
  const double v = ch_vpost(20.0, 20.0);
  EXPECT_GT(v, 0.0);
  EXPECT_NEAR(v * 800.0, 1.0, 2e-3);
}

TEST(PhaseSqueezed, PbetaMatchesThetaAverage) {
  for (double alpha : {0.1, 1.0, 3.0})
    for (double r : {0.0, 0.5, 1.25})
      for (double b : {0.3, 2.0}) {
        const std::complex<double> beta(b, 0.0);
        const double want = theta_average([&](double t) { return sh_likelihood(alpha, r, beta, t); }, -pi, pi);
        EXPECT_NEAR(sh_pbeta(alpha, r, beta), want, 1e-10 * want) << alpha << " " << r << " " << b;
      }
}

TEST(PhaseSqueezed, EstimatorAndVpostMatchGrid) {
  for (double r : {0.25, 0.9}) {
    const std::complex<double> beta = std::polar(1.4, -0.6);
    const auto post = sh_grid_posterior(1.1, r, beta);
    const auto cm = circular_mean(post);
    const auto est = sh_estimator(1.1, r, beta);
    ASSERT_TRUE(est.defined);
    EXPECT_NEAR(est.value, cm.value, 1e-10);
    EXPECT_NEAR(sh_vpost(1.1, r, beta), variance_circular(post, cm.value), 1e-10);
  }
}

TEST(PhaseSqueezed, RoutesAgree) {
  for (double b : {0.2, 1.0, 2.2}) {
    const ShSeries d = sh_series(0.8, 0.3, b, {}, false);
    const ShSeries c = sh_series_collapsed(0.8, 0.3, b);
    EXPECT_EQ(d.route, SeriesRoute::DoubleSum);
    EXPECT_EQ(c.route, SeriesRoute::Collapsed);
    EXPECT_NEAR(d.pbeta, c.pbeta, 1e-12 * c.pbeta);
    EXPECT_NEAR(d.moment, c.moment, 1e-10);
    EXPECT_NEAR(d.vpost, c.vpost, 1e-10);
  }
}

TEST(PhaseSqueezed, IllConditionedDoubleSumFallsBack) {
  const ShSeries s = sh_series(3.0, 1.25, 5.0);
  EXPECT_EQ(s.route, SeriesRoute::Collapsed);
  const auto post = sh_grid_posterior(3.0, 1.25, {5.0, 0.0});
  EXPECT_NEAR(s.vpost, variance_circular(post, circular_mean(post).value), 1e-10);
}

TEST(PhaseSqueezed, ReducesToCoherent) {
  for (double a2 : {0.5, 2.0}) {
    const double alpha = std::sqrt(a2);
    EXPECT_NEAR(sh_vpost(alpha, 0.0, {0.7, 0.0}), ch_vpost(alpha, 0.7), 1e-12);
    EXPECT_NEAR(sh_avg_variance(alpha, 0.0).value, ch_avg_variance(alpha), 1e-8);
  }
}

TEST(PhaseSqueezed, ExplicitShortCutoffFails) {
  SeriesTruncation t;
  t.N = 1;
  EXPECT_THROW(sh_series(1.5, 0.5, 1.5, t), TruncationError);
  EXPECT_THROW(sh_avg_variance(1.0, 0.25, t), TruncationError);
}

TEST(PhaseSqueezed, RotationOfBetaLeavesVpost) {
  const std::complex<double> beta(0.9, 0.4);
  EXPECT_NEAR(sh_vpost(1.0, 0.4, beta), sh_vpost(1.0, 0.4, beta * std::polar(1.0, 1.1)), 1e-14);
}

TEST(PhaseHomodyne, SeriesMatchThetaAverage) {
  for (double alpha : {0.2, 1.0, 2.5})
    for (double q : {-3.0, -0.4, 0.0, 1.7}) {
      const double p = theta_average([&](double t) { return hom_likelihood(alpha, q, t); }, 0.0, pi);
      EXPECT_NEAR(hom_pq(alpha, q), p, 1e-11 * p);
      const double re = theta_average([&](double t) { return std::cos(t) * hom_likelihood(alpha, q, t); }, 0.0, pi) / p;
      const double im = theta_average([&](double t) { return std::sin(t) * hom_likelihood(alpha, q, t); }, 0.0, pi) / p;
      const auto m = hom_circular_moment(alpha, q);
      EXPECT_NEAR(m.real(), re, 1e-11);
      EXPECT_NEAR(m.imag(), im, 1e-11);
    }
}

TEST(PhaseHomodyne, ZeroAlphaRejected) {
  EXPECT_THROW(hom_circular_moment(0.0, 0.3), DomainError);
  EXPECT_NEAR(hom_pq(0.0, 0.3), std::exp(-0.09) / std::sqrt(pi), 1e-15);
}

TEST(PhaseHomodyne, SqueezedLikelihoodNormalized) {
  const double r = 0.5, phi = 0.8, theta = 1.1;
  const double z = romberg([&](double q) { return hom_likelihood_sq(1.0, r, phi, q, theta); }, -15, 15, 1e-13).value;
  EXPECT_NEAR(z, 1.0, 1e-12);
}

TEST(PhaseHomodyne, LikelihoodMatchesStateMarginal) {
  const ProbeSpec probe{{0.9, 0.0}, 0.4, 0.7};
  const PhaseTask task{probe, Measurement::homodyne()};
  const auto like = task.strategy().likelihood();
  for (double theta : {0.2, 1.4, 2.9})
    EXPECT_NEAR(like(theta, Outcome::homodyne(0.3)), hom_likelihood_sq(0.9, 0.4, 0.7, 0.3, theta), 1e-14);
}

TEST(PhaseTask, Supports) {
  PhaseTask het{ProbeSpec{{1.0, 0.0}, 0.0, 0.0}, Measurement::heterodyne()};
  PhaseTask hom{ProbeSpec{{1.0, 0.0}, 0.0, 0.0}, Measurement::homodyne()};
  EXPECT_TRUE(het.support().periodic());
  EXPECT_FALSE(hom.support().periodic());
  EXPECT_EQ(het.flat_prior().size(), 2048u);
  EXPECT_EQ(hom.flat_prior().size(), 4097u);
}

TEST(PhaseNumeric, VacuumHomodyneIsFlat) {
  const PhaseTask task{ProbeSpec{}, Measurement::homodyne()};
  EXPECT_NEAR(phase_avg_variance_numeric(task, Method::quadrature()).value, 0.5, 1e-9);
}

TEST(PhiBeta, Convention) {
  EXPECT_NEAR(phi_beta(std::polar(2.0, -0.4)), 0.4, 1e-15);
  EXPECT_EQ(phi_beta({0.0, 0.0}), 0.0);
}
