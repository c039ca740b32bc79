#pragma once

#include <optional>
#include <vector>

#include "gaussbayes/engine.hpp"

namespace gaussbayes {

/// diag(e^{-r}, e^{r}): squeezing along q with known angle 0.
struct SymplecticSqueeze {
  Eigen::Matrix2d m = Eigen::Matrix2d::Identity();

  static SymplecticSqueeze along_q(double r);
  double det() const { return m.determinant(); }
};

GaussianState squeeze_channel(const GaussianState& st, double r);

/// q-homodyne density for probe squeezed by the unknown r.
double sq_likelihood(const ProbeSpec& probe, double r, double q);

/// Vacuum probe: q ~ N(0, delta^2) with delta = e^{-r}/sqrt2. The conjugate Gamma
/// acts on the precision lambda = 1/delta^2 = 2 e^{2r}.
double precision_from_r(double r);
double r_from_precision(double lambda);
double r_from_delta(double delta);
GammaPrior vacuum_gamma_update(const GammaPrior& prior, std::span<const double> outcomes);
/// Gamma density over lambda carried to r, Jacobian 4 e^{2r} included.
double gamma_density_r(const GammaPrior& prior, double r);

struct SqueezeTask {
  ProbeSpec probe;  // real alpha >= 0
  GaussianPrior prior{0.0, 1.0};
  std::size_t grid_nodes = 2001;
  double width_sd = 6.0;
  std::optional<GridDistribution> custom_grid;  // replaces the Gaussian r-grid

  void validate() const;
  GridDistribution grid() const;
  EstimationStrategy strategy() const;
};

GridDistribution sq_posterior(const SqueezeTask& task, double q);
AverageVariance sq_avg_variance(const SqueezeTask& task, const Method& method,
                                std::uint64_t seed = 0, const EngineOptions& opts = {});
double sq_van_trees(double n, double sigma0sq);

struct SplitPoint {
  double alpha = 0.0;
  double s = 0.0;
  double value = 0.0;
  double std_error = 0.0;
};

struct EnergySplit {
  std::vector<SplitPoint> scan;  // s ascending from 0 to asinh(sqrt n)
  SplitPoint best;
};

/// Scan probes with alpha^2 + sinh^2 s = n (psi = 0) and keep the smallest average variance.
EnergySplit energy_split_scan(double n, const GaussianPrior& prior, std::size_t points = 64,
                              const Method& method = Method::quadrature(), std::uint64_t seed = 0,
                              const EngineOptions& opts = {});

}  // namespace gaussbayes
