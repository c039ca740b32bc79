#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussbayes/bayes.hpp"

using namespace gaussbayes;
using std::numbers::pi;

TEST(GaussianUpdate, PrecisionWeighted) {
  const auto p = gaussian_update({1.0, 2.0}, 3.0, 0.5);
  EXPECT_NEAR(p.var0, 1.0 / (0.5 + 2.0), 1e-15);
  EXPECT_NEAR(p.mu0, (1.0 / 2.0 + 3.0 / 0.5) * p.var0, 1e-15);
  EXPECT_LT(p.var0, 0.5);
}

TEST(GaussianUpdate, RejectsBadVariance) {
  EXPECT_THROW(gaussian_update({0.0, 1.0}, 0.0, 0.0), DomainError);
  EXPECT_THROW(gaussian_update({0.0, -1.0}, 0.0, 1.0), DomainError);
}

TEST(GammaUpdate, AddsIncrements) {
  const std::vector<double> qs = {0.5, -1.0, 2.0};
  const auto p = gamma_update({2.0, 1.5}, qs);
  EXPECT_DOUBLE_EQ(p.a, 3.5);
  EXPECT_DOUBLE_EQ(p.b, 1.5 + 0.5 * (0.25 + 1.0 + 4.0));
  EXPECT_THROW(gamma_update({2.0, 1.5}, std::vector<double>{}), DomainError);
}

TEST(GammaPrior, DensityNormalized) {
  const GammaPrior g{2.5, 0.7};
  double s = 0.0;
  const double h = 1e-3;
  for (double x = h / 2; x < 80.0; x += h) s += g.pdf(x) * h;
  EXPECT_NEAR(s, 1.0, 1e-6);
  EXPECT_NEAR(g.mean(), 2.5 / 0.7, 1e-15);
}

TEST(Grid, GaussianMoments) {
  const GaussianPrior p{0.4, 0.3};
  const auto g = GridDistribution::gaussian(p, 2001, 9.0);
  EXPECT_NEAR(g.total_mass(), 1.0, 1e-14);
  const double m = mean_estimator(g);
  EXPECT_NEAR(m, 0.4, 1e-12);
  EXPECT_NEAR(variance_mse(g, m), 0.3, 1e-12);
}

TEST(Grid, PeriodicCircleExcludesEndpoint) {
  const auto g = GridDistribution::uniform(Support::circle(-pi, pi), 16);
  EXPECT_TRUE(g.support().periodic());
  EXPECT_EQ(g.size(), 16u);
  EXPECT_NEAR(g.nodes().back(), pi - 2 * pi / 16, 1e-15);
  EXPECT_NEAR(g.total_mass(), 1.0, 1e-15);
}

TEST(Grid, ArcIsNotPeriodic) {
  const auto g = GridDistribution::uniform(Support::circle(0.0, pi), 9);
  EXPECT_FALSE(g.support().periodic());
  EXPECT_NEAR(g.nodes().back(), pi, 1e-15);
}

TEST(Grid, RejectsBadInput) {
  EXPECT_THROW(GridDistribution(Support::interval(0, 1), {0.0, 0.5, 1.0}, {1.0, -1.0, 1.0}), DomainError);
  EXPECT_THROW(GridDistribution(Support::interval(0, 1), {0.0, 1.0}, {1.0}), DomainError);
  EXPECT_THROW(GridDistribution(Support::interval(0, 1), {0.0, 0.5, 1.0}, {0.0, 0.0, 0.0}), InconsistencyError);
}

TEST(Grid, ReweightZeroMassIsInconsistent) {
  const auto g = GridDistribution::uniform(Support::interval(0, 1), 11);
  const std::vector<double> zeros(11, 0.0);
  EXPECT_THROW(g.reweighted(zeros), InconsistencyError);
}

TEST(GridUpdate, EvidenceIsPredictive) {
  // N(0,1) prior, N(theta, 0.5) likelihood: predictive N(0, 1.5)
  const auto g = GridDistribution::gaussian({0.0, 1.0}, 4001, 10.0);
  const LikelihoodFn like = [](double t, const Outcome& m) {
    const double d = m.q() - t;
    return std::exp(-d * d) / std::sqrt(pi);
  };
  const double q = 0.8;
  EXPECT_NEAR(evidence(g, like, Outcome::homodyne(q)), std::exp(-q * q / 3.0) / std::sqrt(3.0 * pi), 1e-12);
}

TEST(Circular, UniformIsUndefined) {
  const auto g = GridDistribution::uniform(Support::circle(-pi, pi), 64);
  const auto cm = circular_mean(g);
  EXPECT_FALSE(cm.defined);
  EXPECT_EQ(cm.value, 0.0);
  EXPECT_NEAR(variance_circular(g, cm.value), 0.5, 1e-15);
}

TEST(Circular, VonMisesMean) {
  // von Mises(mu, kappa): |<e^{i theta}>| = I_1(kappa) / I_0(kappa)
  const double mu = 0.9, kappa = 2.0;
  const auto g = GridDistribution::tabulate(Support::circle(-pi, pi), 512,
                                            [&](double t) { return std::exp(kappa * std::cos(t - mu)); });
  const auto cm = circular_mean(g);
  EXPECT_TRUE(cm.defined);
  EXPECT_NEAR(cm.value, mu, 1e-12);
  const double rbar = std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
  EXPECT_NEAR(std::abs(cm.moment), rbar, 1e-12);
  EXPECT_NEAR(variance_circular(g, cm.value), 0.5 * (1 - std::cyl_bessel_i(2.0, kappa) / std::cyl_bessel_i(0.0, kappa)), 1e-12);
}

TEST(Fisher, GaussianPrior) {
  EXPECT_DOUBLE_EQ(fisher_information_prior(GaussianPrior{0.0, 0.25}), 4.0);
  const auto g = GridDistribution::gaussian({0.0, 0.25}, 4001, 8.0);
  EXPECT_NEAR(fisher_information_prior(g).value, 4.0, 1e-4);
}

TEST(Fisher, ZeroDensityNodesExcluded) {
  const auto g = GridDistribution::tabulate(Support::interval(-1, 1), 201,
                                            [](double x) { return x < 0 ? 0.0 : 1.0 - x * x; });
  EXPECT_GT(fisher_information_prior(g).excluded_nodes, 0u);
}

TEST(VanTrees, Bound) {
  EXPECT_DOUBLE_EQ(van_trees_bound(1.0, 4.0), 0.2);
  EXPECT_THROW(van_trees_bound(0.0, 0.0), DomainError);
}
