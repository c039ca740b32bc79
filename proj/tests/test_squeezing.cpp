#include <gtest/gtest.h>

#include <cmath>

#include "gaussbayes/quadrature.hpp"
#include "gaussbayes/squeezing.hpp"

using namespace gaussbayes;

TEST(Squeezing, PrecisionRoundTrip) {
  for (double r : {-1.5, 0.0, 0.8}) {
    EXPECT_NEAR(r_from_precision(precision_from_r(r)), r, 1e-15);
    EXPECT_NEAR(precision_from_r(r), 2.0 * std::exp(2.0 * r), 1e-14);
    EXPECT_NEAR(r_from_delta(std::exp(-r) / std::sqrt(2.0)), r, 1e-15);
  }
}

TEST(Squeezing, GammaDensityInRIsNormalized) {
  const GammaPrior g{2.0, 1.0};
  const auto q = romberg([&](double r) { return gamma_density_r(g, r); }, -12.0, 4.0, 1e-12);
  EXPECT_NEAR(q.value, 1.0, 1e-10);
}

TEST(Squeezing, VacuumLikelihood) {
  const ProbeSpec vac{};
  for (double r : {-0.5, 0.3})
    for (double q : {0.0, 0.7}) {
      const double v = std::exp(-2 * r) / 2;
      EXPECT_NEAR(sq_likelihood(vac, r, q), std::exp(-q * q / (2 * v)) / std::sqrt(2 * std::numbers::pi * v), 1e-14);
    }
}

TEST(Squeezing, LikelihoodMeanShrinks) {
  const ProbeSpec coh{{1.0, 0.0}, 0.0, 0.0};
  const double r = 0.4;
  const auto st = squeeze_channel(coh.state(), r);
  EXPECT_NEAR(st.mean(0), std::sqrt(2.0) * std::exp(-r), 1e-15);
  EXPECT_NEAR(SymplecticSqueeze::along_q(r).det(), 1.0, 1e-15);
}

TEST(Squeezing, ChainedGammaUpdate) {
  const GammaPrior p{2.0, 1.0};
  const std::vector<double> qs = {0.5, -0.25, 1.5};
  GammaPrior c = p;
  for (double q : qs) c = vacuum_gamma_update(c, std::span<const double>(&q, 1));
  const auto b = vacuum_gamma_update(p, qs);
  EXPECT_EQ(c.a, b.a);
  EXPECT_EQ(c.b, b.b);
}

TEST(Squeezing, VanTreesFormula) {
  EXPECT_DOUBLE_EQ(sq_van_trees(0.0, 1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(sq_van_trees(1.0, 1.0), 1.0 / 19.0);
}

TEST(Squeezing, AverageVarianceAboveBound) {
  SqueezeTask t;
  t.prior = {-0.5, 1.0};
  t.probe = ProbeSpec{{1.0, 0.0}, 0.5, 0.0};
  const auto v = sq_avg_variance(t, Method::quadrature());
  EXPECT_LT(v.value, 1.0);
  EXPECT_GE(v.value, sq_van_trees(t.probe.mean_photon(), 1.0));
}

TEST(Squeezing, PosteriorNormalized) {
  SqueezeTask t;
  t.probe = ProbeSpec{{0.5, 0.0}, 0.3, 0.0};
  const auto post = sq_posterior(t, 0.4);
  EXPECT_NEAR(post.total_mass(), 1.0, 1e-13);
  EXPECT_EQ(post.size(), 2001u);
}

TEST(Squeezing, CustomGridUsed) {
  SqueezeTask t;
  t.custom_grid = GridDistribution::uniform(Support::interval(-1.0, 1.0), 101);
  EXPECT_EQ(t.grid().size(), 101u);
}

TEST(Squeezing, RejectsComplexDisplacement) {
  SqueezeTask t;
  t.probe = ProbeSpec{{0.5, 0.1}, 0.0, 0.0};
  EXPECT_THROW(t.validate(), DomainError);
}

TEST(EnergySplit, ContourEndpoints) {
  const double n = 1.0;
  const auto es = energy_split_scan(n, {-0.5, 1.0}, 16);
  ASSERT_EQ(es.scan.size(), 16u);
  EXPECT_EQ(es.scan.front().s, 0.0);
  EXPECT_NEAR(es.scan.front().alpha, 1.0, 1e-15);
  EXPECT_NEAR(es.scan.back().s, std::asinh(1.0), 1e-15);
  EXPECT_NEAR(es.scan.back().alpha, 0.0, 1e-7);
  for (const auto& p : es.scan) {
    EXPECT_NEAR(p.alpha * p.alpha + std::sinh(p.s) * std::sinh(p.s), n, 1e-12);
    EXPECT_GE(p.value, es.best.value);
  }
}
