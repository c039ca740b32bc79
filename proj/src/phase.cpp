#include "gaussbayes/phase.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <numbers>
#include <string>

#include "gaussbayes/specfun.hpp"

namespace gaussbayes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// 4 + 2x leaves ring terms near (x/2)^N / N! ~ 1e-5 for x ~ 1; the extra
// 12 + 6 sqrt(x) brings them under 1e-12 across the tested box.
int default_cutoff(double a, double b, double c) {
  const double x = std::max({a, b, c});
  return static_cast<int>(std::ceil(16.0 + 2.0 * x + 6.0 * std::sqrt(x)));
}

int resolve_cutoff(const SeriesTruncation& trunc, double a, double b, double c) {
  trunc.validate();
  return trunc.N > 0 ? trunc.N : default_cutoff(a, b, c);
}

double wrap_angle(double x) {
  x = std::remainder(x, 2.0 * kPi);
  return x >= kPi ? x - 2.0 * kPi : x;
}

void check_alpha_positive(double alpha, const char* who) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) throw DomainError(std::string(who) + ": alpha must be > 0");
}

void check_r(double r, const char* who) {
  if (!(r >= 0.0) || !std::isfinite(r)) throw DomainError(std::string(who) + ": r must be >= 0");
}

void truncation_failure(const char* who, int n, double ring, double scale) {
  throw TruncationError(std::string(who) + ": last ring of terms " + std::to_string(ring) +
                            " exceeds tail_tol x partial sum " + std::to_string(scale) +
                            " at N=" + std::to_string(n),
                        n);
}

inline double at(const std::vector<double>& v, long k) { return v[static_cast<std::size_t>(std::labs(k))]; }

}  // namespace

void PhaseTask::validate() const {
  probe.validate();
  measurement.validate();
  if (measurement.kind == MeasurementKind::Heterodyne && !(std::abs(probe.alpha) > 0.0)) {
    throw DomainError("PhaseTask: heterodyne phase estimation needs a non-zero displacement");
  }
}

Support PhaseTask::support() const {
  return measurement.kind == MeasurementKind::Heterodyne ? Support::circle(-kPi, kPi)
                                                         : Support::circle(0.0, kPi);
}

GridDistribution PhaseTask::flat_prior(std::size_t nodes) const {
  if (nodes == 0) nodes = measurement.kind == MeasurementKind::Heterodyne ? 2048 : 4097;
  return GridDistribution::uniform(support(), nodes);
}

EstimationStrategy PhaseTask::strategy() const {
  validate();
  const GaussianState st = probe.state();
  return {[st](double theta) { return rotate(st, theta); }, measurement};
}

void SeriesTruncation::validate() const {
  if (N < 0) throw DomainError("SeriesTruncation: N must be >= 1 (0 selects the default)");
  if (!(tail_tol > 0.0)) throw DomainError("SeriesTruncation: tail_tol must be positive");
}

double phi_beta(std::complex<double> beta) { return beta == 0.0 ? 0.0 : -std::arg(beta); }

GridDistribution ch_posterior(double alpha, std::complex<double> beta, std::size_t nodes) {
  check_alpha_positive(alpha, "ch_posterior");
  const double k = 2.0 * alpha * std::abs(beta);
  const double phi = phi_beta(beta);
  return GridDistribution::tabulate(Support::circle(-kPi, kPi), nodes, [=](double t) {
    return std::exp(k * (std::cos(t - phi) - 1.0));
  });
}

double ch_vpost(double alpha, double abs_beta) {
  if (!(alpha >= 0.0) || !(abs_beta >= 0.0)) throw DomainError("ch_vpost: alpha, |beta| must be >= 0");
  const double x = alpha * abs_beta;
  if (x == 0.0) return 0.5;
  if (2.0 * x < 600.0) {
    return hyp0f1(2.0, x * x) / (2.0 * bessel_i(0, 2.0 * x) * gamma_fn(2.0));
  }
  // 0F1(2; x^2) = I_1(2x) / x, evaluated with the e^{-2x} scaling.
  return bessel_i_log_scaled(1, 2.0 * x) / (2.0 * x * bessel_i_log_scaled(0, 2.0 * x));
}

double ch_avg_variance(double alpha) {
  if (!(alpha >= 0.0)) throw DomainError("ch_avg_variance: alpha must be >= 0");
  const double n = alpha * alpha;
  if (n < 1e-8) return 0.5 - n / 4.0 + n * n / 12.0;
  return -std::expm1(-n) / (2.0 * n);
}

double sh_likelihood(double alpha, double r, std::complex<double> beta, double theta) {
  check_alpha_positive(alpha, "sh_likelihood");
  check_r(r, "sh_likelihood");
  const std::complex<double> z = std::polar(1.0, theta) * beta - alpha;
  const double ch = std::cosh(r);
  const double e = (std::exp(-r) * z.real() * z.real() + std::exp(r) * z.imag() * z.imag()) / ch;
  return std::exp(-e) / (kPi * ch);
}

ShSeries sh_series_collapsed(double alpha, double r, double abs_beta, const SeriesTruncation& trunc) {
  check_alpha_positive(alpha, "sh_series");
  check_r(r, "sh_series");
  const double t = std::tanh(r);
  const double b = abs_beta;
  const double a_arg = 2.0 * alpha * b * (1.0 - t);
  const double b_arg = b * b * t;
  ShSeries out;
  out.route = SeriesRoute::Collapsed;
  out.N = resolve_cutoff(trunc, 2.0 * alpha * b, b * b, alpha * alpha);
  const int n = out.N;
  const auto av = bessel_i_scaled_sequence(2L * n + 2, a_arg);
  const auto bv = bessel_i_scaled_sequence(n, b_arg);
  double k = 0.0, s = 0.0, v = 0.0, ring_k = 0.0, ring_s = 0.0, ring_v = 0.0;
  for (long m = -n; m <= n; ++m) {
    const double w = at(bv, m);
    const double tk = w * at(av, 2 * m);
    const double ts = w * at(av, 2 * m + 1);
    const double tv = w * (at(av, 2 * m) - 0.5 * at(av, 2 * m + 2) - 0.5 * at(av, 2 * m - 2));
    k += tk;
    s += ts;
    v += tv;
    if (std::labs(m) == n) {
      ring_k += std::fabs(tk);
      ring_s += std::fabs(ts);
      ring_v += std::fabs(tv);
    }
  }
  const double scale = trunc.tail_tol * k;
  if (ring_k > scale || ring_s > scale || ring_v > scale) {
    truncation_failure("sh_series", n, std::max({ring_k, ring_s, ring_v}), k);
  }
  const double expo = -alpha * alpha * (1.0 - t) - b * b + a_arg + b_arg;
  out.pbeta = std::exp(expo) * k / (kPi * std::cosh(r));
  out.moment = s / k;
  out.vpost = v / (2.0 * k);
  return out;
}

ShSeries sh_series(double alpha, double r, double abs_beta, const SeriesTruncation& trunc,
                   bool allow_collapse) {
  check_alpha_positive(alpha, "sh_series");
  check_r(r, "sh_series");
  const double t = std::tanh(r);
  const double b = abs_beta;
  const double a_arg = 2.0 * alpha * b;
  const double b_arg = b * b * t;
  const double c_arg = a_arg * t;
  // The double sum carries magnitudes ~e^{2C} above its value.
  if (allow_collapse && 2.0 * c_arg > 36.0) return sh_series_collapsed(alpha, r, abs_beta, trunc);

  ShSeries out;
  out.route = SeriesRoute::DoubleSum;
  out.N = resolve_cutoff(trunc, a_arg, b * b, alpha * alpha);
  const int n = out.N;
  const auto av = bessel_i_scaled_sequence(3L * n + 2, a_arg);
  const auto bv = bessel_i_scaled_sequence(n, b_arg);
  const auto cv = bessel_i_scaled_sequence(n, c_arg);
  double k = 0.0, s = 0.0, v = 0.0;
  double abs_k = 0.0, abs_s = 0.0, abs_v = 0.0;
  double ring_k = 0.0, ring_s = 0.0, ring_v = 0.0;
  for (long m1 = -n; m1 <= n; ++m1) {
    const double bm = at(bv, m1);
    if (bm == 0.0) continue;
    for (long m2 = -n; m2 <= n; ++m2) {
      // (-1)^{m1} I_{-2m1-m2}(-A) I_{m1}(-B) I_{m2}(C) = (-1)^{m2} |...| in scaled form.
      const double w = (m2 & 1 ? -bm : bm) * at(cv, m2);
      const long n0 = -2 * m1 - m2;
      const double tk = w * at(av, n0);
      const double ts = w * at(av, n0 - 1);
      const double tv = w * (at(av, n0) - 0.5 * at(av, n0 + 2) - 0.5 * at(av, n0 - 2));
      k += tk;
      s += ts;
      v += tv;
      abs_k += std::fabs(tk);
      abs_s += std::fabs(ts);
      abs_v += std::fabs(tv);
      if (std::labs(m1) == n || std::labs(m2) == n) {
        ring_k += std::fabs(tk);
        ring_s += std::fabs(ts);
        ring_v += std::fabs(tv);
      }
    }
  }
  out.condition = k != 0.0 ? abs_k / std::fabs(k) : INFINITY;
  const double rounding = 8.0 * kEps * static_cast<double>(2 * n + 1) * std::max({abs_k, abs_s, abs_v});
  if (!(rounding <= trunc.tail_tol * k)) {
    if (allow_collapse) return sh_series_collapsed(alpha, r, abs_beta, trunc);
  }
  const double scale = trunc.tail_tol * std::fabs(k);
  if (ring_k > scale || ring_s > scale || ring_v > scale) {
    truncation_failure("sh_series", n, std::max({ring_k, ring_s, ring_v}), k);
  }
  const double expo = -alpha * alpha * (1.0 - t) - b * b + a_arg + b_arg + c_arg;
  out.pbeta = std::exp(expo) * k / (kPi * std::cosh(r));
  // (-1)^{n2+1} I_{-2n2-n3-1}(-A) flips sign twice, so the scaled moment sum is added as is.
  out.moment = s / k;
  out.vpost = v / (2.0 * k);
  return out;
}

double sh_pbeta(double alpha, double r, std::complex<double> beta, const SeriesTruncation& trunc) {
  return sh_series(alpha, r, std::abs(beta), trunc).pbeta;
}

PhaseEstimate sh_estimator(double alpha, double r, std::complex<double> beta,
                           const SeriesTruncation& trunc) {
  const ShSeries s = sh_series(alpha, r, std::abs(beta), trunc);
  PhaseEstimate out;
  if (std::fabs(s.moment) < 1e-12) return out;
  out.defined = true;
  const double phi = phi_beta(beta);
  out.value = s.moment > 0.0 ? phi : wrap_angle(phi + kPi);
  return out;
}

double sh_vpost(double alpha, double r, std::complex<double> beta, const SeriesTruncation& trunc) {
  return sh_series(alpha, r, std::abs(beta), trunc).vpost;
}

QuadResult sh_avg_variance(double alpha, double r, const SeriesTruncation& trunc,
                           const RadialOptions& quad) {
  check_alpha_positive(alpha, "sh_avg_variance");
  check_r(r, "sh_avg_variance");
  const double widest = std::sqrt((std::exp(2.0 * r) + 1.0) / 4.0);
  const double radius = alpha + quad.extent_sd * std::sqrt(2.0) * widest;
  auto f = [&](double b) {
    if (b == 0.0) return 0.0;
    const ShSeries s = sh_series(alpha, r, b, trunc);
    return 2.0 * kPi * b * s.pbeta * s.vpost;
  };
  const QuadResult res = romberg(f, 0.0, radius, quad.rel_tol, 1e-14, quad.max_levels);
  if (!res.converged) {
    throw ToleranceError("sh_avg_variance: radial quadrature did not converge", res.value, res.error);
  }
  return res;
}

double hom_likelihood(double alpha, double q, double theta) {
  const double d = q - std::sqrt(2.0) * alpha * std::cos(theta);
  return std::exp(-d * d) / std::sqrt(kPi);
}

double hom_likelihood_sq(double alpha, double r, double phi_s, double q, double theta) {
  const double g = std::cosh(2.0 * r) - std::cos(phi_s + 2.0 * theta) * std::sinh(2.0 * r);
  const double d = q - std::sqrt(2.0) * alpha * std::cos(theta);
  return std::exp(-d * d / g) / std::sqrt(kPi * g);
}

namespace {

struct HomSums {
  int n = 0;
  double x_arg = 0.0;
  std::vector<double> xv, yv;
  double m = 0.0;  // scaled M
};

HomSums hom_sums(double alpha, double q, const SeriesTruncation& trunc) {
  if (!(alpha >= 0.0)) throw DomainError("hom_pq: alpha must be >= 0");
  HomSums h;
  h.x_arg = 2.0 * std::sqrt(2.0) * q * alpha;
  h.n = resolve_cutoff(trunc, std::fabs(h.x_arg), alpha * alpha, 0.0);
  h.xv = bessel_i_scaled_sequence(2L * h.n + 2, std::fabs(h.x_arg));
  h.yv = bessel_i_scaled_sequence(h.n, alpha * alpha);
  double ring = 0.0;
  for (long m = -h.n; m <= h.n; ++m) {
    // I_m(-alpha^2) = (-1)^m I_m(alpha^2)
    const double term = (m & 1 ? -1.0 : 1.0) * at(h.xv, 2 * m) * at(h.yv, m);
    h.m += term;
    if (std::labs(m) == h.n) ring += std::fabs(term);
  }
  if (ring > trunc.tail_tol * std::fabs(h.m)) truncation_failure("hom_pq", h.n, ring, h.m);
  return h;
}

}  // namespace

double hom_pq(double alpha, double q, const SeriesTruncation& trunc) {
  const HomSums h = hom_sums(alpha, q, trunc);
  return std::exp(-q * q + std::fabs(h.x_arg)) / std::sqrt(kPi) * h.m;
}

std::complex<double> hom_circular_moment(double alpha, double q, const SeriesTruncation& trunc) {
  if (!(alpha > 0.0)) throw DomainError("hom_circular_moment: alpha must be > 0");
  const HomSums h = hom_sums(alpha, q, trunc);
  if (!(h.m > 0.0) || !std::isfinite(h.m)) {
    throw InconsistencyError("hom_circular_moment: degenerate posterior (M vanishes)");
  }
  const int n = h.n;
  double re = 0.0, ring_re = 0.0;
  for (long k = -n; k <= n; ++k) {
    const double term = (k & 1 ? -1.0 : 1.0) * at(h.xv, 2 * k + 1) * at(h.yv, k);
    re += term;
    if (std::labs(k) == n) ring_re += std::fabs(term);
  }
  if (h.x_arg < 0.0) re = -re;
  double im = 0.0, ring_im = 0.0;
  for (long nn = -n; nn <= n; ++nn) {
    const double xn = at(h.xv, 2 * nn);
    for (long m = -n; m <= n; ++m) {
      const double num = 1.0 - 4.0 * static_cast<double>(m * m) - 4.0 * static_cast<double>(nn * nn);
      const double den = static_cast<double>((2 * nn - 2 * m - 1) * (2 * nn - 2 * m + 1)) *
                         static_cast<double>((2 * nn + 2 * m + 1) * (2 * nn + 2 * m - 1));
      const double term = (m & 1 ? -1.0 : 1.0) * xn * at(h.yv, m) * num / den;
      im += term;
      if (std::labs(nn) == n || std::labs(m) == n) ring_im += std::fabs(term);
    }
  }
  const double scale = trunc.tail_tol * h.m;
  if (ring_re > scale || ring_im > scale) {
    truncation_failure("hom_circular_moment", n, std::max(ring_re, ring_im), h.m);
  }
  return {re / h.m, 2.0 / kPi * im / h.m};
}

AverageVariance phase_avg_variance_numeric(const PhaseTask& task, const Method& method,
                                           std::uint64_t seed, const EngineOptions& opts,
                                           std::size_t nodes) {
  return average_posterior_variance(task.strategy(), task.flat_prior(nodes), method, seed, opts);
}

}  // namespace gaussbayes
