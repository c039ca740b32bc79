#pragma once

#include <complex>
#include <optional>
#include <utility>

#include "gaussbayes/engine.hpp"

namespace gaussbayes {

/// Isotropic Gaussian prior over a complex displacement, probed by S(r e^{i phi})|0>.
struct DisplacementTask {
  std::complex<double> alpha0{0.0, 0.0};
  double var0 = 1.0;
  double probe_r = 0.0;
  double probe_phi = 0.0;  // homodyne only; heterodyne probes use phi = 0
  Measurement measurement = Measurement::heterodyne();

  void validate() const;
  GaussianPrior prior_real() const { return {alpha0.real(), var0}; }
  GaussianPrior prior_imag() const { return {alpha0.imag(), var0}; }
  GaussianState probe_state(std::complex<double> alpha) const;
};

/// Posteriors of (alpha_R, alpha_I) after heterodyne outcome beta.
std::pair<GaussianPrior, GaussianPrior> het_posterior(const DisplacementTask& task,
                                                      std::complex<double> beta);
double het_avg_total_variance(double sigma0sq, double r);

/// Posterior of alpha_R after homodyne outcome q; alpha_I keeps its prior.
GaussianPrior hom_posterior(const DisplacementTask& task, double q);
double hom_avg_variance_q(double sigma0sq, double r);

/// Squeezing above which q-homodyne beats heterodyne in total variance; none for sigma0sq >= 1/2.
std::optional<double> squeezing_threshold(double sigma0sq);

/// Average alpha_R variance after m homodyne rounds with a q-squeezed probe.
double repeated_variance(double sigma0sq, double r, int m);
/// One step of V -> (1/V + 4 e^{2r})^{-1}.
double repeated_variance_step(double v, double r);

/// Engine counterparts: total heterodyne variance is the sum of two one-parameter runs.
AverageVariance het_avg_total_variance_numeric(double sigma0sq, double r, const Method& method,
                                               std::uint64_t seed = 0,
                                               const EngineOptions& opts = {},
                                               std::size_t grid_nodes = 2001);
AverageVariance hom_avg_variance_numeric(double sigma0sq, double r, double phi, const Method& method,
                                         std::uint64_t seed = 0, const EngineOptions& opts = {},
                                         std::size_t grid_nodes = 2001);

}  // namespace gaussbayes
