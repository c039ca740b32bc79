#include "gaussbayes/bayes.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "gaussbayes/quadrature.hpp"

namespace gaussbayes {

void GaussianPrior::validate() const {
  if (!(var0 > 0.0) || !std::isfinite(var0) || !std::isfinite(mu0)) {
    throw DomainError("GaussianPrior: var0 must be positive and finite");
  }
}

double GaussianPrior::sd() const { return std::sqrt(var0); }

double GaussianPrior::pdf(double x) const {
  const double d = x - mu0;
  return std::exp(-0.5 * d * d / var0) / std::sqrt(2.0 * std::numbers::pi * var0);
}

void GammaPrior::validate() const {
  if (!(a > 0.0) || !(b > 0.0)) throw DomainError("GammaPrior: a and b must be positive");
}

double GammaPrior::log_pdf(double x) const {
  if (!(x > 0.0)) return -INFINITY;
  return a * std::log(b) - std::lgamma(a) + (a - 1.0) * std::log(x) - b * x;
}

double GammaPrior::pdf(double x) const { return x > 0.0 ? std::exp(log_pdf(x)) : 0.0; }

bool Support::periodic() const {
  return kind == Kind::Circle && std::fabs(span() - 2.0 * std::numbers::pi) < 1e-12;
}

std::vector<double> GridDistribution::uniform_nodes(const Support& support, std::size_t n) {
  if (!(support.hi > support.lo)) throw DomainError("Support: hi must exceed lo");
  if (n < 2) throw DomainError("GridDistribution: need at least 2 nodes");
  std::vector<double> nodes(n);
  const double h = support.periodic() ? support.span() / static_cast<double>(n)
                                      : support.span() / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = support.lo + h * static_cast<double>(i);
  if (!support.periodic()) nodes.back() = support.hi;
  return nodes;
}

GridDistribution::GridDistribution(Support support, std::vector<double> nodes,
                                   std::vector<double> density)
    : support_(support), nodes_(std::move(nodes)), density_(std::move(density)) {
  if (!(support_.hi > support_.lo)) throw DomainError("Support: hi must exceed lo");
  if (nodes_.size() < 2 || nodes_.size() != density_.size()) {
    throw DomainError("GridDistribution: nodes and density must have equal length >= 2");
  }
  const double tol = 1e-12 * std::max(1.0, support_.span());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (i > 0 && !(nodes_[i] > nodes_[i - 1])) {
      throw DomainError("GridDistribution: nodes must be strictly increasing");
    }
    if (nodes_[i] < support_.lo - tol || nodes_[i] > support_.hi + tol ||
        (support_.periodic() && nodes_[i] >= support_.hi - tol)) {
      throw DomainError("GridDistribution: node outside support");
    }
    if (!(density_[i] >= 0.0) || !std::isfinite(density_[i])) {
      throw DomainError("GridDistribution: density must be finite and nonnegative");
    }
  }
  weights_ = trapezoid_weights(nodes_, support_.periodic(), support_.span());
  const double mass = total_mass();
  if (!(mass > 0.0)) throw InconsistencyError("GridDistribution: zero total mass");
  for (double& p : density_) p /= mass;
}

double GridDistribution::total_mass() const {
  double acc = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) acc += weights_[i] * density_[i];
  return acc;
}

GridDistribution GridDistribution::tabulate(Support support, std::size_t n,
                                            const std::function<double(double)>& f) {
  std::vector<double> nodes = uniform_nodes(support, n);
  std::vector<double> dens(n);
  for (std::size_t i = 0; i < n; ++i) dens[i] = f(nodes[i]);
  return GridDistribution(support, std::move(nodes), std::move(dens));
}

GridDistribution GridDistribution::uniform(Support support, std::size_t n) {
  return tabulate(support, n, [](double) { return 1.0; });
}

GridDistribution GridDistribution::gaussian(const GaussianPrior& prior, std::size_t n,
                                            double width_sd) {
  prior.validate();
  const double half = width_sd * prior.sd();
  return tabulate(Support::interval(prior.mu0 - half, prior.mu0 + half), n,
                  [&](double x) { return prior.pdf(x); });
}

GridDistribution GridDistribution::reweighted(std::span<const double> factors) const {
  if (factors.size() != nodes_.size()) throw DomainError("reweighted: size mismatch");
  std::vector<double> dens(nodes_.size());
  double mass = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!(factors[i] >= 0.0) || !std::isfinite(factors[i])) {
      throw DomainError("reweighted: likelihood must be finite and nonnegative");
    }
    dens[i] = density_[i] * factors[i];
    mass += weights_[i] * dens[i];
  }
  if (!(mass > 0.0)) throw InconsistencyError("grid_update: outcome has zero evidence under the prior");
  return GridDistribution(support_, nodes_, std::move(dens));
}

GaussianPrior gaussian_update(const GaussianPrior& prior, double like_mean, double like_var) {
  prior.validate();
  if (!(like_var > 0.0)) throw DomainError("gaussian_update: like_var must be positive");
  const double total = prior.var0 + like_var;
  return {(like_var * prior.mu0 + prior.var0 * like_mean) / total, like_var * prior.var0 / total};
}

GammaPrior gamma_update(const GammaPrior& prior, std::span<const double> outcomes) {
  prior.validate();
  if (outcomes.empty()) throw DomainError("gamma_update: outcomes must be nonempty");
  double ss = 0.0;
  for (double q : outcomes) ss += q * q;
  return {prior.a + 0.5 * static_cast<double>(outcomes.size()), prior.b + 0.5 * ss};
}

GridDistribution grid_update(const GridDistribution& prior, const LikelihoodFn& like,
                             const Outcome& m) {
  std::vector<double> factors(prior.size());
  const auto nodes = prior.nodes();
  for (std::size_t i = 0; i < prior.size(); ++i) factors[i] = like(nodes[i], m);
  return prior.reweighted(factors);
}

double evidence(const GridDistribution& prior, const LikelihoodFn& like, const Outcome& m) {
  return prior.expectation([&](double t) { return like(t, m); });
}

double mean_estimator(const GridDistribution& d) {
  if (d.support().is_circle()) throw DomainError("mean_estimator: circular support, use circular_mean");
  return d.expectation([](double t) { return t; });
}

double variance_mse(const GridDistribution& d, double est) {
  if (d.support().is_circle()) throw DomainError("variance_mse: circular support, use variance_circular");
  return d.expectation([est](double t) { return (t - est) * (t - est); });
}

CircularMean circular_mean(const GridDistribution& d) {
  if (!d.support().is_circle()) throw DomainError("circular_mean: support is not a circle");
  const double c = d.expectation([](double t) { return std::cos(t); });
  const double s = d.expectation([](double t) { return std::sin(t); });
  CircularMean out;
  out.moment = {c, s};
  if (std::hypot(c, s) >= 1e-12) {
    out.defined = true;
    out.value = std::atan2(s, c);
  }
  return out;
}

double variance_circular(const GridDistribution& d, double est) {
  if (!d.support().is_circle()) throw DomainError("variance_circular: support is not a circle");
  return d.expectation([est](double t) {
    const double s = std::sin(t - est);
    return s * s;
  });
}

double fisher_information_prior(const GaussianPrior& prior) {
  prior.validate();
  return 1.0 / prior.var0;
}

FisherEstimate fisher_information_prior(const GridDistribution& prior) {
  const auto x = prior.nodes();
  const auto p = prior.density();
  const auto w = prior.weights();
  const std::size_t n = prior.size();
  const bool periodic = prior.support().periodic();
  const double period = prior.support().span();
  FisherEstimate out;
  for (std::size_t i = 0; i < n; ++i) {
    const bool edge = i == 0 || i + 1 == n;
    if (edge && !periodic) continue;
    const std::size_t lo = i == 0 ? n - 1 : i - 1;
    const std::size_t hi = i + 1 == n ? 0 : i + 1;
    if (!(p[lo] > 0.0) || !(p[i] > 0.0) || !(p[hi] > 0.0)) {
      ++out.excluded_nodes;
      continue;
    }
    double dx = x[hi] - x[lo];
    if (dx <= 0.0) dx += period;
    const double dlog = (std::log(p[hi]) - std::log(p[lo])) / dx;
    out.value += w[i] * p[i] * dlog * dlog;
  }
  return out;
}

double van_trees_bound(double prior_fi, double qfi) {
  if (!(prior_fi >= 0.0) || !(qfi >= 0.0) || prior_fi + qfi == 0.0) {
    throw DomainError("van_trees_bound: informations must be >= 0 and not both zero");
  }
  return 1.0 / (prior_fi + qfi);
}

}  // namespace gaussbayes
