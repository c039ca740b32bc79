#pragma once

#include <complex>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "gaussbayes/measurement.hpp"

namespace gaussbayes {

struct GaussianPrior {
  double mu0 = 0.0;
  double var0 = 1.0;

  void validate() const;
  double sd() const;
  double pdf(double x) const;
};

/// Gamma(a, b) in shape/rate form.
struct GammaPrior {
  double a = 1.0;
  double b = 1.0;

  void validate() const;
  double mean() const { return a / b; }
  double variance() const { return a / (b * b); }
  double pdf(double x) const;
  double log_pdf(double x) const;
};

using ConjugatePrior = std::variant<GaussianPrior, GammaPrior>;

struct Support {
  enum class Kind { Interval, Circle };
  Kind kind = Kind::Interval;
  double lo = 0.0;
  double hi = 1.0;

  static Support interval(double lo, double hi) { return {Kind::Interval, lo, hi}; }
  static Support circle(double lo, double hi) { return {Kind::Circle, lo, hi}; }
  bool is_circle() const { return kind == Kind::Circle; }
  /// A circle whose span is a full turn is periodic; shorter arcs use the closed rule.
  bool periodic() const;
  double span() const { return hi - lo; }
};

/// Density tabulated on nodes of a support, normalized under the trapezoid rule.
class GridDistribution {
 public:
  GridDistribution(Support support, std::vector<double> nodes, std::vector<double> density);

  /// n uniform nodes (periodic circles exclude hi) with density f, then normalized.
  static GridDistribution tabulate(Support support, std::size_t n,
                                   const std::function<double(double)>& f);
  static GridDistribution uniform(Support support, std::size_t n);
  static GridDistribution gaussian(const GaussianPrior& prior, std::size_t n = 2001,
                                   double width_sd = 6.0);
  static std::vector<double> uniform_nodes(const Support& support, std::size_t n);

  const Support& support() const { return support_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> density() const { return density_; }
  std::span<const double> weights() const { return weights_; }

  template <class F>
  double expectation(F&& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * density_[i] * f(nodes_[i]);
    return acc;
  }
  double total_mass() const;

  /// Pointwise product with factors, renormalized. Throws InconsistencyError on zero mass.
  GridDistribution reweighted(std::span<const double> factors) const;

 private:
  Support support_;
  std::vector<double> nodes_;
  std::vector<double> density_;
  std::vector<double> weights_;
};

using LikelihoodFn = std::function<double(double theta, const Outcome& m)>;

GaussianPrior gaussian_update(const GaussianPrior& prior, double like_mean, double like_var);
GammaPrior gamma_update(const GammaPrior& prior, std::span<const double> outcomes);

GridDistribution grid_update(const GridDistribution& prior, const LikelihoodFn& like,
                             const Outcome& m);
double evidence(const GridDistribution& prior, const LikelihoodFn& like, const Outcome& m);

double mean_estimator(const GridDistribution& d);
double variance_mse(const GridDistribution& d, double est);

struct CircularMean {
  double value = 0.0;  // 0 when undefined
  bool defined = false;
  std::complex<double> moment{0.0, 0.0};
};

CircularMean circular_mean(const GridDistribution& d);
double variance_circular(const GridDistribution& d, double est);

struct FisherEstimate {
  double value = 0.0;
  std::size_t excluded_nodes = 0;  // zero-density nodes skipped
};

double fisher_information_prior(const GaussianPrior& prior);
FisherEstimate fisher_information_prior(const GridDistribution& prior);

double van_trees_bound(double prior_fi, double qfi);

}  // namespace gaussbayes
