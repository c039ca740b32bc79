#include "gaussbayes/specfun.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <string>

#include "gaussbayes/errors.hpp"

namespace gaussbayes {

namespace {

constexpr double kSeriesCutover = 25.0;
constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

// Power series for e^{-x} I_n(x), n >= 0, x > 0.
double scaled_series(long n, double x, const SeriesControl& ctl) {
  const double half = 0.5 * x;
  const double log_lead = static_cast<double>(n) * std::log(half) -
                          std::lgamma(static_cast<double>(n) + 1.0) - x;
  const double q = half * half;
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (long k = 0;; ++k) {
    if (k >= ctl.max_terms) {
      throw TruncationError("bessel_i: power series did not converge for n=" +
                                std::to_string(n) + ", x=" + std::to_string(x),
                            k);
    }
    term *= q / ((static_cast<double>(k) + 1.0) * (static_cast<double>(k + n) + 1.0));
    sum += term;
    small = term < ctl.rel_tol * sum ? small + 1 : 0;
    if (small >= 3) break;
  }
  const double log_value = log_lead + std::log(sum);
  if (log_value < std::log(ctl.abs_tol)) return 0.0;
  return std::exp(log_value);
}

long miller_start(long n, double x) {
  const double top = std::max(static_cast<double>(n), x);
  long m = static_cast<long>(top + 16.0 + 8.0 * std::sqrt(top));
  return m + (m & 1);
}

// Backward recurrence for e^{-x} I_n(x), n >= 0, x > 0; normalized with
// e^{-x}(I_0 + 2 sum_k I_k) = 1.
double scaled_miller(long n, double x) {
  const long m = miller_start(n, x);
  const double two_over_x = 2.0 / x;
  double above = 0.0;
  double current = 1.0;
  double norm = 0.0;
  double target = 0.0;
  for (long k = m; k >= 1; --k) {
    if (k == n) target = current;
    norm += 2.0 * current;
    const double below = static_cast<double>(k) * two_over_x * current + above;
    above = current;
    current = below;
    if (current > kRescaleAbove) {
      current *= kRescaleBy;
      above *= kRescaleBy;
      norm *= kRescaleBy;
      target *= kRescaleBy;
    }
  }
  if (n == 0) target = current;
  norm += current;
  return target / norm;
}

}  // namespace

void SeriesControl::validate() const {
  if (max_terms < 1) throw DomainError("SeriesControl: max_terms must be >= 1");
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0)) {
    throw DomainError("SeriesControl: tolerances must be positive");
  }
}

double bessel_i_log_scaled(long n, double x, const SeriesControl& ctl) {
  ctl.validate();
  if (std::labs(n) > 1000000) throw DomainError("bessel_i: |n| exceeds 1e6");
  if (!std::isfinite(x)) throw RangeError("bessel_i: non-finite argument", x);
  const long order = std::labs(n);
  const double ax = std::fabs(x);
  double value;
  if (ax == 0.0) {
    value = order == 0 ? 1.0 : 0.0;
  } else if (ax <= kSeriesCutover) {
    value = scaled_series(order, ax, ctl);
  } else {
    value = scaled_miller(order, ax);
  }
  return (x < 0.0 && (order & 1)) ? -value : value;
}

double bessel_i(long n, double x, const SeriesControl& ctl) {
  const double scaled = bessel_i_log_scaled(n, x, ctl);
  const double ax = std::fabs(x);
  if (scaled == 0.0) return 0.0;
  const double log_mag = std::log(std::fabs(scaled)) + ax;
  if (log_mag > std::log(std::numeric_limits<double>::max())) {
    throw RangeError("bessel_i: overflow of e^|x| scaling at x=" + std::to_string(x), x);
  }
  return std::copysign(std::exp(log_mag), scaled);
}

std::vector<double> bessel_i_scaled_sequence(long kmax, double x, const SeriesControl& ctl) {
  ctl.validate();
  if (kmax < 0) throw DomainError("bessel_i_scaled_sequence: kmax < 0");
  if (!std::isfinite(x)) throw RangeError("bessel_i: non-finite argument", x);
  std::vector<double> out(static_cast<std::size_t>(kmax) + 1, 0.0);
  const double ax = std::fabs(x);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const long m = miller_start(kmax, ax);
  const double two_over_x = 2.0 / ax;
  double above = 0.0;
  double current = 1.0;
  double norm = 0.0;
  for (long k = m; k >= 1; --k) {
    if (k <= kmax) out[static_cast<std::size_t>(k)] = current;
    norm += 2.0 * current;
    const double below = static_cast<double>(k) * two_over_x * current + above;
    above = current;
    current = below;
    if (current > kRescaleAbove) {
      current *= kRescaleBy;
      above *= kRescaleBy;
      norm *= kRescaleBy;
      for (long j = k; j <= kmax; ++j) out[static_cast<std::size_t>(j)] *= kRescaleBy;
    }
  }
  out[0] = current;
  norm += current;
  for (long k = 0; k <= kmax; ++k) {
    double v = out[static_cast<std::size_t>(k)] / norm;
    if (v < ctl.abs_tol) v = 0.0;
    out[static_cast<std::size_t>(k)] = (x < 0.0 && (k & 1)) ? -v : v;
  }
  return out;
}

double hyp0f1(double b, double z, const SeriesControl& ctl) {
  ctl.validate();
  if (b <= 0.0 && b == std::floor(b)) {
    throw DomainError("hyp0f1: b is a non-positive integer");
  }
  double term = 1.0;
  double sum = 1.0;
  int small = 0;
  for (long k = 0;; ++k) {
    if (k >= ctl.max_terms) {
      throw TruncationError("hyp0f1: series did not converge", k);
    }
    term *= z / ((b + static_cast<double>(k)) * (static_cast<double>(k) + 1.0));
    sum += term;
    small = std::fabs(term) < ctl.rel_tol * std::fabs(sum) || std::fabs(term) < ctl.abs_tol
                ? small + 1
                : 0;
    if (small >= 3) break;
  }
  return sum;
}

double gamma_fn(double z) {
  if (z <= 0.0 && z == std::floor(z)) {
    throw DomainError("gamma_fn: pole at non-positive integer " + std::to_string(z));
  }
  return std::tgamma(z);
}

}  // namespace gaussbayes
