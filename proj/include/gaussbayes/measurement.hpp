#pragma once

#include <Eigen/Core>
#include <complex>

#include "gaussbayes/phasespace.hpp"
#include "gaussbayes/random.hpp"

namespace gaussbayes {

enum class MeasurementKind { Heterodyne, Homodyne };

struct Measurement {
  MeasurementKind kind = MeasurementKind::Heterodyne;
  double quadrature_angle = 0.0;  // homodyne only; 0 measures q

  static Measurement heterodyne() { return {MeasurementKind::Heterodyne, 0.0}; }
  static Measurement homodyne(double angle = 0.0) { return {MeasurementKind::Homodyne, angle}; }
  void validate() const;
};

/// Heterodyne outcome beta, or homodyne outcome q stored in the real part.
struct Outcome {
  std::complex<double> value{0.0, 0.0};

  static Outcome homodyne(double q) { return {{q, 0.0}}; }
  static Outcome heterodyne(std::complex<double> beta) { return {beta}; }
  double q() const { return value.real(); }
  std::complex<double> beta() const { return value; }
};

/// Gaussian law of a homodyne outcome.
struct HomodyneMoments {
  double mean = 0.0;
  double var = 0.5;
};

/// Gaussian law of (Re beta, Im beta) for heterodyne.
struct HeterodyneMoments {
  Eigen::Vector2d mean = Eigen::Vector2d::Zero();
  Eigen::Matrix2d cov = Eigen::Matrix2d::Identity() / 2.0;
};

HomodyneMoments homodyne_moments(const GaussianState& st, double angle);
HeterodyneMoments heterodyne_moments(const GaussianState& st);

/// p(beta) = F(|beta>, st) / pi, a density over the complex plane.
double heterodyne_density(const GaussianState& st, std::complex<double> beta);

/// Marginal of the Wigner function along q cos(angle) + p sin(angle).
double homodyne_density(const GaussianState& st, double q, double angle);

double outcome_density(const GaussianState& st, const Measurement& meas, const Outcome& m);

Outcome sample_outcome(const GaussianState& st, const Measurement& meas, Rng& rng);

}  // namespace gaussbayes
