#pragma once

#include <complex>

#include "gaussbayes/engine.hpp"
#include "gaussbayes/quadrature.hpp"

namespace gaussbayes {

/// Flat-prior phase estimation with probe rotate(probe.state(), theta).
struct PhaseTask {
  ProbeSpec probe;
  Measurement measurement = Measurement::heterodyne();

  void validate() const;
  /// [-pi, pi) for heterodyne, the arc [0, pi] for homodyne.
  Support support() const;
  /// nodes = 0 picks 2048 (heterodyne) or 4097 (homodyne).
  GridDistribution flat_prior(std::size_t nodes = 0) const;
  EstimationStrategy strategy() const;
};

/// Cutoff |n| <= N for the Bessel sums; N = 0 selects ceil(16 + 2x + 6 sqrt x),
/// x = max(2 alpha|beta|, |beta|^2, alpha^2).
struct SeriesTruncation {
  int N = 0;
  double tail_tol = 1e-10;

  void validate() const;
};

/// phi_beta with beta = |beta| e^{-i phi_beta}.
double phi_beta(std::complex<double> beta);

// Coherent probe, heterodyne.
GridDistribution ch_posterior(double alpha, std::complex<double> beta, std::size_t nodes = 2048);
double ch_vpost(double alpha, double abs_beta);
double ch_avg_variance(double alpha);

// p-squeezed displaced probe D(alpha) S(-r)|0>, heterodyne.
double sh_likelihood(double alpha, double r, std::complex<double> beta, double theta);

enum class SeriesRoute { DoubleSum, Collapsed };

/// Radial Bessel-sum quantities at |beta|: p(beta), the real factor of
/// <e^{i theta}> = e^{i phi_beta} moment, and V_post(beta).
struct ShSeries {
  double pbeta = 0.0;
  double moment = 0.0;
  double vpost = 0.5;
  int N = 0;
  SeriesRoute route = SeriesRoute::DoubleSum;
  double condition = 1.0;  // sum |terms| / |sum| of the double sum, when evaluated
};

/// Double sum as written; falls back to the inner sums collapsed by
/// I_n(x - y) = sum_k (-1)^k I_{n+k}(x) I_k(y) when cancellation would exceed tail_tol.
ShSeries sh_series(double alpha, double r, double abs_beta, const SeriesTruncation& trunc = {},
                   bool allow_collapse = true);
/// Same quantities from the single sums directly.
ShSeries sh_series_collapsed(double alpha, double r, double abs_beta, const SeriesTruncation& trunc = {});

double sh_pbeta(double alpha, double r, std::complex<double> beta, const SeriesTruncation& trunc = {});

struct PhaseEstimate {
  double value = 0.0;
  bool defined = false;
};
PhaseEstimate sh_estimator(double alpha, double r, std::complex<double> beta,
                           const SeriesTruncation& trunc = {});
double sh_vpost(double alpha, double r, std::complex<double> beta, const SeriesTruncation& trunc = {});

struct RadialOptions {
  double rel_tol = 1e-9;
  double extent_sd = 6.0;  // |beta| cut at alpha + extent_sd * sqrt2 * widest outcome sd
  int max_levels = 14;
};

/// Radial quadrature of 2 pi |beta| p(beta) V_post(beta).
QuadResult sh_avg_variance(double alpha, double r, const SeriesTruncation& trunc = {},
                           const RadialOptions& quad = {});

// Coherent / squeezed probe, q-homodyne, theta in [0, pi].
double hom_likelihood(double alpha, double q, double theta);
double hom_likelihood_sq(double alpha, double r, double phi_s, double q, double theta);
double hom_pq(double alpha, double q, const SeriesTruncation& trunc = {});
std::complex<double> hom_circular_moment(double alpha, double q, const SeriesTruncation& trunc = {});

AverageVariance phase_avg_variance_numeric(const PhaseTask& task, const Method& method,
                                           std::uint64_t seed = 0, const EngineOptions& opts = {},
                                           std::size_t nodes = 0);

}  // namespace gaussbayes
