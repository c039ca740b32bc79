#include "gaussbayes/measurement.hpp"

#include <cmath>
#include <numbers>

namespace gaussbayes {

void Measurement::validate() const {
  if (kind == MeasurementKind::Homodyne &&
      !(quadrature_angle >= 0.0 && quadrature_angle < std::numbers::pi)) {
    throw DomainError("Measurement: homodyne angle must lie in [0, pi)");
  }
}

HomodyneMoments homodyne_moments(const GaussianState& st, double angle) {
  const GaussianState rotated = angle == 0.0 ? st : rotate(st, angle);
  return {rotated.mean(0), rotated.cov(0, 0)};
}

HeterodyneMoments heterodyne_moments(const GaussianState& st) {
  HeterodyneMoments out;
  out.mean = st.mean / std::sqrt(2.0);
  out.cov = (st.cov + Eigen::Matrix2d::Identity() / 2.0) / 2.0;
  return out;
}

double heterodyne_density(const GaussianState& st, std::complex<double> beta) {
  const GaussianState coherent = displace(vacuum<double>(), beta);
  return fidelity(coherent, st) / std::numbers::pi;
}

double homodyne_density(const GaussianState& st, double q, double angle) {
  const HomodyneMoments m = homodyne_moments(st, angle);
  const double d = q - m.mean;
  return std::exp(-0.5 * d * d / m.var) / std::sqrt(2.0 * std::numbers::pi * m.var);
}

double outcome_density(const GaussianState& st, const Measurement& meas, const Outcome& m) {
  if (meas.kind == MeasurementKind::Homodyne) {
    return homodyne_density(st, m.q(), meas.quadrature_angle);
  }
  return heterodyne_density(st, m.beta());
}

Outcome sample_outcome(const GaussianState& st, const Measurement& meas, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  if (meas.kind == MeasurementKind::Homodyne) {
    const HomodyneMoments m = homodyne_moments(st, meas.quadrature_angle);
    return Outcome::homodyne(m.mean + std::sqrt(m.var) * normal(rng));
  }
  const HeterodyneMoments m = heterodyne_moments(st);
  const double l00 = std::sqrt(m.cov(0, 0));
  const double l10 = m.cov(1, 0) / l00;
  const double l11 = std::sqrt(m.cov(1, 1) - l10 * l10);
  const double z0 = normal(rng);
  const double z1 = normal(rng);
  return Outcome::heterodyne({m.mean(0) + l00 * z0, m.mean(1) + l10 * z0 + l11 * z1});
}

}  // namespace gaussbayes
