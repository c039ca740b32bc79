#include "gaussbayes/displacement.hpp"

#include <cmath>

namespace gaussbayes {

namespace {

// Past 6 sd the truncated prior loses ~1e-7 of its variance, visible to the engine checks.
constexpr double kPriorWidthSd = 9.0;

double hom_gamma(double r, double phi) { return std::cosh(2.0 * r) - std::cos(phi) * std::sinh(2.0 * r); }

void check_sigma(double sigma0sq) {
  if (!(sigma0sq > 0.0)) throw DomainError("displacement: sigma0sq must be positive");
}

}  // namespace

void DisplacementTask::validate() const {
  check_sigma(var0);
  if (!(probe_r >= 0.0)) throw DomainError("DisplacementTask: probe_r must be >= 0");
  measurement.validate();
}

GaussianState DisplacementTask::probe_state(std::complex<double> alpha) const {
  const double phi = measurement.kind == MeasurementKind::Heterodyne ? 0.0 : probe_phi;
  return displace(squeeze(vacuum<double>(), probe_r, phi), alpha);
}

std::pair<GaussianPrior, GaussianPrior> het_posterior(const DisplacementTask& task,
                                                      std::complex<double> beta) {
  task.validate();
  if (task.measurement.kind != MeasurementKind::Heterodyne) {
    throw DomainError("het_posterior: task measurement is not heterodyne");
  }
  const double s2 = task.var0;
  const double r = task.probe_r;
  auto part = [&](double b, double a0, double sign) {
    const double noise = 1.0 + std::exp(-sign * 2.0 * r);
    GaussianPrior out;
    out.mu0 = (4.0 * b * s2 + a0 * noise) / (4.0 * s2 + noise);
    out.var0 = 1.0 / (1.0 / s2 + 2.0 * (1.0 + sign * std::tanh(r)));
    return out;
  };
  return {part(beta.real(), task.alpha0.real(), 1.0), part(beta.imag(), task.alpha0.imag(), -1.0)};
}

double het_avg_total_variance(double sigma0sq, double r) {
  check_sigma(sigma0sq);
  const double t = std::tanh(r);
  return 1.0 / (1.0 / sigma0sq + 2.0 * (1.0 + t)) + 1.0 / (1.0 / sigma0sq + 2.0 * (1.0 - t));
}

GaussianPrior hom_posterior(const DisplacementTask& task, double q) {
  task.validate();
  if (task.measurement.kind != MeasurementKind::Homodyne || task.measurement.quadrature_angle != 0.0) {
    throw DomainError("hom_posterior: task measurement is not q-homodyne");
  }
  const double s2 = task.var0;
  const double g = hom_gamma(task.probe_r, task.probe_phi);
  GaussianPrior out;
  out.mu0 = (2.0 * std::sqrt(2.0) * s2 * q + task.alpha0.real() * g) / (4.0 * s2 + g);
  out.var0 = s2 * g / (4.0 * s2 + g);
  return out;
}

double hom_avg_variance_q(double sigma0sq, double r) {
  check_sigma(sigma0sq);
  return 1.0 / (1.0 / sigma0sq + 4.0 * std::exp(2.0 * r));
}

std::optional<double> squeezing_threshold(double sigma0sq) {
  check_sigma(sigma0sq);
  if (sigma0sq >= 0.5) return std::nullopt;
  return -0.5 * std::log(1.0 - 2.0 * sigma0sq);
}

double repeated_variance_step(double v, double r) { return 1.0 / (1.0 / v + 4.0 * std::exp(2.0 * r)); }

double repeated_variance(double sigma0sq, double r, int m) {
  check_sigma(sigma0sq);
  if (m < 0) throw DomainError("repeated_variance: m must be >= 0");
  return 1.0 / (1.0 / sigma0sq + 4.0 * static_cast<double>(m) * std::exp(2.0 * r));
}

AverageVariance het_avg_total_variance_numeric(double sigma0sq, double r, const Method& method,
                                               std::uint64_t seed, const EngineOptions& opts,
                                               std::size_t grid_nodes) {
  check_sigma(sigma0sq);
  const GaussianState base = squeeze(vacuum<double>(), r, 0.0);
  const GridDistribution prior = GridDistribution::gaussian({0.0, sigma0sq}, grid_nodes, kPriorWidthSd);
  const EstimationStrategy re{[base](double t) { return displace(base, {t, 0.0}); },
                              Measurement::heterodyne()};
  const EstimationStrategy im{[base](double t) { return displace(base, {0.0, t}); },
                              Measurement::heterodyne()};
  const AverageVariance a = average_posterior_variance(re, prior, method, seed, opts);
  const AverageVariance b = average_posterior_variance(im, prior, method, derive_seed(seed, 1), opts);
  AverageVariance out;
  out.value = a.value + b.value;
  out.std_error = std::hypot(a.std_error, b.std_error);
  out.error_estimate = a.error_estimate + b.error_estimate;
  out.outcome_nodes = a.outcome_nodes + b.outcome_nodes;
  out.samples = a.samples + b.samples;
  return out;
}

AverageVariance hom_avg_variance_numeric(double sigma0sq, double r, double phi, const Method& method,
                                         std::uint64_t seed, const EngineOptions& opts,
                                         std::size_t grid_nodes) {
  check_sigma(sigma0sq);
  const GaussianState base = squeeze(vacuum<double>(), r, phi);
  const GridDistribution prior = GridDistribution::gaussian({0.0, sigma0sq}, grid_nodes, kPriorWidthSd);
  const EstimationStrategy s{[base](double t) { return displace(base, {t, 0.0}); },
                             Measurement::homodyne(0.0)};
  return average_posterior_variance(s, prior, method, seed, opts);
}

}  // namespace gaussbayes
