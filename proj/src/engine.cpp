#include "gaussbayes/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "gaussbayes/parallel.hpp"

namespace gaussbayes {

LikelihoodFn EstimationStrategy::likelihood() const {
  return [enc = encode, meas = measurement](double theta, const Outcome& m) {
    return outcome_density(enc(theta), meas, m);
  };
}

namespace {

struct Node {
  double theta;  // shifted by the prior centre on intervals
  double cos1, sin1, cos2, sin2;
  double log_weight;
  // Outcome law: 1-D uses mean_x, prec_xx; 2-D uses all.
  double mean_x, mean_y;
  double prec_xx, prec_xy, prec_yy;
  double sd_min, sd_max;
};

struct Posterior {
  double log_scale = -INFINITY;  // p(m) = exp(log_scale) * mass
  double mass = 0.0;
  double variance = 0.0;
};

class Kernel {
 public:
  Kernel(const EstimationStrategy& strategy, const GridDistribution& prior)
      : circle_(prior.support().is_circle()),
        hetero_(strategy.measurement.kind == MeasurementKind::Heterodyne) {
    strategy.measurement.validate();
    const auto x = prior.nodes();
    const auto p = prior.density();
    const auto w = prior.weights();
    centre_ = circle_ ? 0.0 : prior.expectation([](double t) { return t; });
    for (std::size_t i = 0; i < prior.size(); ++i) {
      const double wp = w[i] * p[i];
      if (!(wp > 0.0)) continue;
      const GaussianState st = strategy.encode(x[i]);
      Node n{};
      n.theta = x[i] - centre_;
      n.cos1 = std::cos(x[i]);
      n.sin1 = std::sin(x[i]);
      n.cos2 = std::cos(2.0 * x[i]);
      n.sin2 = std::sin(2.0 * x[i]);
      if (hetero_) {
        const HeterodyneMoments m = heterodyne_moments(st);
        const double det = m.cov.determinant();
        n.mean_x = m.mean(0);
        n.mean_y = m.mean(1);
        n.prec_xx = m.cov(1, 1) / det;
        n.prec_yy = m.cov(0, 0) / det;
        n.prec_xy = -m.cov(0, 1) / det;
        const double tr = m.cov.trace();
        const double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
        n.sd_max = std::sqrt(0.5 * tr + disc);
        n.sd_min = std::sqrt(std::max(det / (0.5 * tr + disc), 0.0));
        n.log_weight = std::log(wp) - std::log(2.0 * std::numbers::pi) - 0.5 * std::log(det);
      } else {
        const HomodyneMoments m = homodyne_moments(st, strategy.measurement.quadrature_angle);
        n.mean_x = m.mean;
        n.prec_xx = 1.0 / m.var;
        n.sd_min = n.sd_max = std::sqrt(m.var);
        n.log_weight = std::log(wp) - 0.5 * std::log(2.0 * std::numbers::pi * m.var);
      }
      nodes_.push_back(n);
      states_.push_back(st);
      mass_.push_back(wp);
    }
    if (nodes_.empty()) throw InconsistencyError("average_posterior_variance: prior has no mass");
  }

  bool heterodyne() const { return hetero_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<GaussianState>& states() const { return states_; }
  const std::vector<double>& mass() const { return mass_; }

  Posterior evaluate(double mx, double my, std::vector<double>& scratch) const {
    scratch.resize(nodes_.size());
    double top = -INFINITY;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const Node& n = nodes_[i];
      const double dx = mx - n.mean_x;
      double quad = n.prec_xx * dx * dx;
      if (hetero_) {
        const double dy = my - n.mean_y;
        quad += 2.0 * n.prec_xy * dx * dy + n.prec_yy * dy * dy;
      }
      const double t = n.log_weight - 0.5 * quad;
      scratch[i] = t;
      top = std::max(top, t);
    }
    Posterior out;
    if (!std::isfinite(top)) return out;
    double z = 0.0, a1 = 0.0, a2 = 0.0, a3 = 0.0, a4 = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      const double e = std::exp(scratch[i] - top);
      const Node& n = nodes_[i];
      z += e;
      if (circle_) {
        a1 += e * n.cos1;
        a2 += e * n.sin1;
        a3 += e * n.cos2;
        a4 += e * n.sin2;
      } else {
        a1 += e * n.theta;
        a2 += e * n.theta * n.theta;
      }
    }
    out.log_scale = top;
    out.mass = z;
    if (circle_) {
      double est = 0.0;
      if (std::hypot(a1, a2) / z >= 1e-12) est = std::atan2(a2, a1);
      const double v = 0.5 - 0.5 * (a3 * std::cos(2.0 * est) + a4 * std::sin(2.0 * est)) / z;
      out.variance = std::clamp(v, 0.0, 1.0);
    } else {
      const double mean = a1 / z;
      out.variance = std::max(0.0, a2 / z - mean * mean);
    }
    return out;
  }

 private:
  bool circle_;
  bool hetero_;
  double centre_ = 0.0;
  std::vector<Node> nodes_;
  std::vector<GaussianState> states_;
  std::vector<double> mass_;
};

// Uniform grid with an even interval count; weights include the trapezoid end halving.
struct Axis {
  std::vector<double> x;
  std::vector<double> fine;    // trapezoid weights
  std::vector<double> coarse;  // same rule on every other node, zero elsewhere
};

Axis make_axis(double lo, double hi, double h) {
  long k = static_cast<long>(std::ceil((hi - lo) / h));
  k = std::max<long>(k + (k & 1), 4);
  const double step = (hi - lo) / static_cast<double>(k);
  Axis a;
  a.x.resize(static_cast<std::size_t>(k) + 1);
  a.fine.assign(a.x.size(), step);
  a.coarse.assign(a.x.size(), 0.0);
  for (long i = 0; i <= k; ++i) {
    a.x[static_cast<std::size_t>(i)] = lo + step * static_cast<double>(i);
    if (i % 2 == 0) a.coarse[static_cast<std::size_t>(i)] = 2.0 * step;
  }
  a.fine.front() *= 0.5;
  a.fine.back() *= 0.5;
  a.coarse.front() *= 0.5;
  a.coarse.back() *= 0.5;
  return a;
}

struct Partial {
  double fine = 0.0;
  double coarse = 0.0;
};

AverageVariance quadrature_1d(const Kernel& k, const EngineOptions& opts) {
  const auto& nodes = k.nodes();
  double c = INFINITY, lo = INFINITY, hi = -INFINITY, need = 0.0;
  for (const Node& n : nodes) c = std::min(c, n.sd_min);
  for (const Node& n : nodes) {
    lo = std::min(lo, n.mean_x - opts.extent_sd * n.sd_max);
    hi = std::max(hi, n.mean_x + opts.extent_sd * n.sd_max);
    const double reach = std::fabs(n.mean_x) + 3.0 * n.sd_max;
    need = std::max(need, std::sqrt(c * c + reach * reach) / n.sd_min);
  }
  // q = c sinh(u): spacing grows with |q| as the likelihood widths do.
  const Axis u = make_axis(std::asinh(lo / c), std::asinh(hi / c), 1.0 / (opts.resolution_1d * need));
  const std::size_t count = u.x.size();
  const std::size_t block = 64;
  const std::size_t blocks = (count + block - 1) / block;
  std::vector<Partial> parts(blocks);
  parallel_for(blocks, opts.threads, [&](std::size_t b) {
    std::vector<double> scratch;
    Partial acc;
    for (std::size_t i = b * block; i < std::min(count, (b + 1) * block); ++i) {
      const double q = c * std::sinh(u.x[i]);
      const double jac = c * std::cosh(u.x[i]);
      const Posterior post = k.evaluate(q, 0.0, scratch);
      if (post.mass == 0.0) continue;
      const double f = std::exp(post.log_scale) * post.mass * post.variance * jac;
      acc.fine += u.fine[i] * f;
      acc.coarse += u.coarse[i] * f;
    }
    parts[b] = acc;
  });
  AverageVariance out;
  double coarse = 0.0;
  for (const Partial& p : parts) {
    out.value += p.fine;
    coarse += p.coarse;
  }
  out.error_estimate = std::fabs(out.value - coarse);
  out.outcome_nodes = count;
  return out;
}

AverageVariance quadrature_2d(const Kernel& k, const EngineOptions& opts) {
  const auto& nodes = k.nodes();
  double h = INFINITY, xlo = INFINITY, xhi = -INFINITY, ylo = INFINITY, yhi = -INFINITY;
  for (const Node& n : nodes) {
    h = std::min(h, n.sd_min / opts.resolution_2d);
    xlo = std::min(xlo, n.mean_x - opts.extent_sd * n.sd_max);
    xhi = std::max(xhi, n.mean_x + opts.extent_sd * n.sd_max);
    ylo = std::min(ylo, n.mean_y - opts.extent_sd * n.sd_max);
    yhi = std::max(yhi, n.mean_y + opts.extent_sd * n.sd_max);
  }
  const Axis ax = make_axis(xlo, xhi, h);
  const Axis ay = make_axis(ylo, yhi, h);
  std::vector<Partial> parts(ay.x.size());
  parallel_for(ay.x.size(), opts.threads, [&](std::size_t j) {
    std::vector<double> scratch;
    Partial acc;
    for (std::size_t i = 0; i < ax.x.size(); ++i) {
      const Posterior post = k.evaluate(ax.x[i], ay.x[j], scratch);
      if (post.mass == 0.0) continue;
      const double f = std::exp(post.log_scale) * post.mass * post.variance;
      acc.fine += ax.fine[i] * f;
      acc.coarse += ax.coarse[i] * f;
    }
    parts[j] = {ay.fine[j] * acc.fine, ay.coarse[j] * acc.coarse};
  });
  AverageVariance out;
  double coarse = 0.0;
  for (const Partial& p : parts) {
    out.value += p.fine;
    coarse += p.coarse;
  }
  out.error_estimate = std::fabs(out.value - coarse);
  out.outcome_nodes = ax.x.size() * ay.x.size();
  return out;
}

AverageVariance monte_carlo(const Kernel& k, const Measurement& meas, long samples,
                            std::uint64_t seed, const EngineOptions& opts) {
  if (samples < 2) throw DomainError("average_posterior_variance: MonteCarlo needs >= 2 samples");
  const auto& mass = k.mass();
  std::vector<double> cdf(mass.size());
  double run = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) cdf[i] = (run += mass[i]);
  for (double& c : cdf) c /= run;
  const long block = 1024;
  const std::size_t blocks = static_cast<std::size_t>((samples + block - 1) / block);
  struct Moments {
    double sum = 0.0;
    double sumsq = 0.0;
  };
  std::vector<Moments> parts(blocks);
  parallel_for(blocks, opts.threads, [&](std::size_t b) {
    Rng rng = substream(seed, b);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> scratch;
    Moments acc;
    const long first = static_cast<long>(b) * block;
    const long last = std::min(samples, first + block);
    for (long s = first; s < last; ++s) {
      const double u = unit(rng);
      std::size_t idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      idx = std::min(idx, cdf.size() - 1);
      const Outcome m = sample_outcome(k.states()[idx], meas, rng);
      const double my = k.heterodyne() ? m.value.imag() : 0.0;
      const Posterior post = k.evaluate(m.value.real(), my, scratch);
      acc.sum += post.variance;
      acc.sumsq += post.variance * post.variance;
    }
    parts[b] = acc;
  });
  double sum = 0.0, sumsq = 0.0;
  for (const Moments& p : parts) {
    sum += p.sum;
    sumsq += p.sumsq;
  }
  const double n = static_cast<double>(samples);
  AverageVariance out;
  out.value = sum / n;
  const double var = std::max(0.0, (sumsq - n * out.value * out.value) / (n - 1.0));
  out.std_error = std::sqrt(var / n);
  out.samples = samples;
  return out;
}

}  // namespace

AverageVariance average_posterior_variance(const EstimationStrategy& strategy,
                                           const GridDistribution& prior, const Method& method,
                                           std::uint64_t seed, const EngineOptions& opts) {
  const Kernel k(strategy, prior);
  if (method.kind == Method::Kind::MonteCarlo) {
    return monte_carlo(k, strategy.measurement, method.samples, seed, opts);
  }
  AverageVariance out = k.heterodyne() ? quadrature_2d(k, opts) : quadrature_1d(k, opts);
  const double limit = std::max(opts.abs_tol, opts.rel_tol * std::fabs(out.value));
  if (opts.throw_on_tolerance && !(out.error_estimate <= limit)) {
    throw ToleranceError("average_posterior_variance: quadrature error estimate " +
                             std::to_string(out.error_estimate) + " exceeds tolerance",
                         out.value, out.error_estimate);
  }
  return out;
}

double posterior_variance(const EstimationStrategy& strategy, const GridDistribution& prior,
                          const Outcome& m) {
  const Kernel k(strategy, prior);
  std::vector<double> scratch;
  const double my = k.heterodyne() ? m.value.imag() : 0.0;
  const Posterior post = k.evaluate(m.value.real(), my, scratch);
  if (post.mass == 0.0) throw InconsistencyError("posterior_variance: zero evidence");
  return post.variance;
}

}  // namespace gaussbayes
