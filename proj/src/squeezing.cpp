#include "gaussbayes/squeezing.hpp"

#include <cmath>
#include <numbers>

namespace gaussbayes {

SymplecticSqueeze SymplecticSqueeze::along_q(double r) {
  SymplecticSqueeze s;
  s.m << std::exp(-r), 0.0, 0.0, std::exp(r);
  return s;
}

GaussianState squeeze_channel(const GaussianState& st, double r) {
  return apply_symplectic(st, SymplecticSqueeze::along_q(r).m);
}

double sq_likelihood(const ProbeSpec& probe, double r, double q) {
  if (probe.alpha.imag() != 0.0) throw DomainError("sq_likelihood: probe alpha must be real");
  const double mean = std::sqrt(2.0) * probe.alpha.real() * std::exp(-r);
  const double var = std::exp(-2.0 * r) *
                     (std::cosh(2.0 * probe.s) - std::cos(probe.psi) * std::sinh(2.0 * probe.s)) / 2.0;
  const double d = q - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

double precision_from_r(double r) { return 2.0 * std::exp(2.0 * r); }

double r_from_precision(double lambda) {
  if (!(lambda > 0.0)) throw DomainError("r_from_precision: lambda must be positive");
  return 0.5 * std::log(lambda / 2.0);
}

double r_from_delta(double delta) {
  if (!(delta > 0.0)) throw DomainError("r_from_delta: delta must be positive");
  return -std::log(std::sqrt(2.0) * delta);
}

GammaPrior vacuum_gamma_update(const GammaPrior& prior, std::span<const double> outcomes) {
  return gamma_update(prior, outcomes);
}

double gamma_density_r(const GammaPrior& prior, double r) {
  const double lambda = precision_from_r(r);
  return std::exp(prior.log_pdf(lambda) + std::log(2.0 * lambda));
}

void SqueezeTask::validate() const {
  probe.validate();
  if (probe.alpha.imag() != 0.0 || probe.alpha.real() < 0.0) {
    throw DomainError("SqueezeTask: probe alpha must be real and >= 0");
  }
  prior.validate();
  if (grid_nodes < 3) throw DomainError("SqueezeTask: grid needs at least 3 nodes");
}

GridDistribution SqueezeTask::grid() const {
  validate();
  if (custom_grid) return *custom_grid;
  return GridDistribution::gaussian(prior, grid_nodes, width_sd);
}

EstimationStrategy SqueezeTask::strategy() const {
  validate();
  const GaussianState st = probe.state();
  return {[st](double r) { return squeeze_channel(st, r); }, Measurement::homodyne(0.0)};
}

GridDistribution sq_posterior(const SqueezeTask& task, double q) {
  const ProbeSpec probe = task.probe;
  return grid_update(task.grid(), [probe](double r, const Outcome& m) {
    return sq_likelihood(probe, r, m.q());
  }, Outcome::homodyne(q));
}

AverageVariance sq_avg_variance(const SqueezeTask& task, const Method& method, std::uint64_t seed,
                                const EngineOptions& opts) {
  return average_posterior_variance(task.strategy(), task.grid(), method, seed, opts);
}

double sq_van_trees(double n, double sigma0sq) {
  if (!(n >= 0.0) || !(sigma0sq > 0.0)) throw DomainError("sq_van_trees: need n >= 0, sigma0sq > 0");
  const double q = 2.0 * (2.0 * n + 1.0) * (2.0 * n + 1.0);
  return van_trees_bound(1.0 / sigma0sq, q);
}

EnergySplit energy_split_scan(double n, const GaussianPrior& prior, std::size_t points,
                              const Method& method, std::uint64_t seed, const EngineOptions& opts) {
  if (!(n >= 0.0)) throw DomainError("energy_split_scan: n must be >= 0");
  EnergySplit out;
  const double s_max = std::asinh(std::sqrt(n));
  const std::size_t count = n == 0.0 ? 1 : std::max<std::size_t>(points, 2);
  for (std::size_t i = 0; i < count; ++i) {
    const double s = count == 1 ? 0.0 : s_max * static_cast<double>(i) / static_cast<double>(count - 1);
    const double sh = std::sinh(s);
    const double alpha = std::sqrt(std::max(0.0, n - sh * sh));
    SqueezeTask task;
    task.probe = ProbeSpec{{alpha, 0.0}, s, 0.0};
    task.prior = prior;
    const AverageVariance v = sq_avg_variance(task, method, derive_seed(seed, i), opts);
    out.scan.push_back({alpha, s, v.value, v.std_error});
  }
  out.best = out.scan.front();
  for (const SplitPoint& p : out.scan) {
    if (p.value < out.best.value) out.best = p;
  }
  return out;
}

}  // namespace gaussbayes
