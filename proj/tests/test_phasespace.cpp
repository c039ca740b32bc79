#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "gaussbayes/phasespace.hpp"

using namespace gaussbayes;
using std::numbers::pi;

TEST(GaussianState, VacuumIsPure) {
  const GaussianState v = vacuum();
  EXPECT_DOUBLE_EQ(v.det(), 0.25);
  EXPECT_TRUE(v.is_pure());
  EXPECT_NO_THROW(v.validate());
}

TEST(GaussianState, ValidateRejectsUnphysical) {
  GaussianState st;
  st.cov = Eigen::Matrix2d::Identity() * 0.4;
  EXPECT_THROW(st.validate(), DomainError);
  st.cov << 1.0, 0.2, 0.1, 1.0;
  EXPECT_THROW(st.validate(), DomainError);
}

TEST(Displace, ShiftsMean) {
  const auto st = displace(vacuum(), std::complex<double>(0.5, -1.5));
  EXPECT_NEAR(st.mean(0), std::sqrt(2.0) * 0.5, 1e-15);
  EXPECT_NEAR(st.mean(1), -std::sqrt(2.0) * 1.5, 1e-15);
  EXPECT_EQ(st.cov, vacuum().cov);
}

TEST(Squeeze, SqueezedVacuumCovariance) {
  const double r = 0.8;
  const auto st = squeeze(vacuum(), r, 0.0);
  EXPECT_NEAR(st.cov(0, 0), std::exp(-2 * r) / 2, 1e-15);
  EXPECT_NEAR(st.cov(1, 1), std::exp(2 * r) / 2, 1e-14);
  EXPECT_NEAR(st.cov(0, 1), 0.0, 1e-15);
  EXPECT_NEAR(squeeze_matrix(1.3, 0.7).determinant(), 1.0, 1e-13);
}

TEST(Squeeze, PhasePiSwapsAxes) {
  const auto st = squeeze(vacuum(), 0.8, pi);
  EXPECT_NEAR(st.cov(0, 0), std::exp(1.6) / 2, 1e-14);
}

TEST(Rotate, CoherentMeanFollowsPhase) {
  const double theta = 0.7;
  const auto st = rotate(displace(vacuum(), std::complex<double>(1.2, 0.0)), theta);
  EXPECT_NEAR(st.mean(0), std::sqrt(2.0) * 1.2 * std::cos(theta), 1e-15);
  EXPECT_NEAR(st.mean(1), -std::sqrt(2.0) * 1.2 * std::sin(theta), 1e-15);
}

TEST(Wigner, VacuumPeak) {
  EXPECT_NEAR(wigner(vacuum(), Eigen::Vector2d(Eigen::Vector2d::Zero())), 1.0 / pi, 1e-15);
}

TEST(Fidelity, CoherentOverlap) {
  const std::complex<double> a(0.3, 0.4), b(-0.5, 1.0);
  const double f = fidelity(displace(vacuum(), a), displace(vacuum(), b));
  EXPECT_NEAR(f, std::exp(-std::norm(a - b)), 1e-15);
}

TEST(Fidelity, SqueezedVacuumOverlap) {
  const double r = 0.9;
  EXPECT_NEAR(fidelity(vacuum(), squeeze(vacuum(), r, 0.3)), 1.0 / std::cosh(r), 1e-14);
}

TEST(Fidelity, MixedAgainstThermal) {
  // thermal states with mean photons n1, n2: F = 1 / (sqrt((n1+1)(n2+1)) - sqrt(n1 n2))^2
  const double n1 = 0.4, n2 = 1.3;
  GaussianState t1, t2;
  t1.cov *= 2 * n1 + 1;
  t2.cov *= 2 * n2 + 1;
  const double want = 1.0 / std::pow(std::sqrt((n1 + 1) * (n2 + 1)) - std::sqrt(n1 * n2), 2);
  EXPECT_NEAR(fidelity(t1, t2), want, 1e-14);
}

TEST(Templated, LongDoubleAgrees) {
  const auto a = squeeze(displace(vacuum<long double>(), std::complex<long double>(0.4L, 0.1L)), 0.5L, 0.2L);
  const auto b = displace(vacuum<long double>(), std::complex<long double>(-0.2L, 0.3L));
  const auto ad = squeeze(displace(vacuum(), std::complex<double>(0.4, 0.1)), 0.5, 0.2);
  const auto bd = displace(vacuum(), std::complex<double>(-0.2, 0.3));
  EXPECT_NEAR(static_cast<double>(fidelity(a, b)), fidelity(ad, bd), 1e-14);
  EXPECT_NEAR(static_cast<double>(a.det()), 0.25, 1e-15);
}

TEST(MeanPhoton, DisplacedSqueezed) {
  const ProbeSpec p{{0.6, -0.8}, 0.7, 1.9};
  EXPECT_NEAR(mean_photon(p.state()), 1.0 + std::sinh(0.7) * std::sinh(0.7), 1e-14);
  EXPECT_NEAR(p.mean_photon(), mean_photon(p.state()), 1e-14);
}

TEST(ProbeSpec, RejectsNegativeSqueezing) {
  const ProbeSpec p{{1.0, 0.0}, -0.1, 0.0};
  EXPECT_THROW(p.validate(), DomainError);
}

TEST(Qfi, Displacement) {
  const StateFamily fam = [](double a) { return displace(vacuum(), std::complex<double>(a, 0.0)); };
  EXPECT_NEAR(qfi_fidelity(fam, 0.2).value, 4.0, 1e-5);
}

TEST(Qfi, CoherentPhase) {
  // 4 |alpha|^2 for e^{-i theta n}
  const double a = 1.3;
  const StateFamily fam = [a](double t) { return rotate(displace(vacuum(), std::complex<double>(a, 0.0)), t); };
  EXPECT_NEAR(qfi_fidelity(fam, 0.4).value, 4.0 * a * a, 1e-5);
}

TEST(Qfi, SqueezedVacuumSqueezing) {
  // pure squeezed vacuum: QFI in r is 2
  const StateFamily fam = [](double r) { return squeeze(vacuum(), r, 0.0); };
  EXPECT_NEAR(qfi_fidelity(fam, 0.5).value, 2.0, 1e-5);
}

TEST(Qfi, ConstantFamilyClamps) {
  const StateFamily fam = [](double) { return vacuum(); };
  const auto q = qfi_fidelity(fam, 0.0);
  EXPECT_EQ(q.value, 0.0);
}
