#pragma once

#include <cstdint>

#include "gaussbayes/bayes.hpp"

namespace gaussbayes {

/// Probe family theta -> rho(theta) read out by one measurement. The estimator
/// follows from the prior support: posterior mean on intervals, circular mean on circles.
struct EstimationStrategy {
  StateFamily encode;
  Measurement measurement;

  LikelihoodFn likelihood() const;
};

struct Method {
  enum class Kind { Quadrature, MonteCarlo };
  Kind kind = Kind::Quadrature;
  long samples = 0;

  static Method quadrature() { return {Kind::Quadrature, 0}; }
  static Method monte_carlo(long samples) { return {Kind::MonteCarlo, samples}; }
};

struct EngineOptions {
  double rel_tol = 1e-6;
  double abs_tol = 1e-12;
  double extent_sd = 9.0;      // outcome range past every likelihood mean, in its sd
  double resolution_1d = 8.0;  // homodyne nodes per likelihood sd
  double resolution_2d = 5.0;  // heterodyne nodes per likelihood sd along its narrow axis
  std::size_t threads = 0;     // 0: hardware concurrency
  bool throw_on_tolerance = true;
};

struct AverageVariance {
  double value = 0.0;
  double std_error = 0.0;       // Monte Carlo only
  double error_estimate = 0.0;  // quadrature step-halving estimate
  std::size_t outcome_nodes = 0;
  long samples = 0;
};

/// Outcome-averaged posterior variance on a grid prior.
AverageVariance average_posterior_variance(const EstimationStrategy& strategy,
                                           const GridDistribution& prior, const Method& method,
                                           std::uint64_t seed = 0, const EngineOptions& opts = {});

/// Posterior variance for one outcome (MSE about the posterior mean, or circular).
double posterior_variance(const EstimationStrategy& strategy, const GridDistribution& prior,
                          const Outcome& m);

}  // namespace gaussbayes
