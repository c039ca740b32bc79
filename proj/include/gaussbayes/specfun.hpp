#pragma once

#include <vector>

namespace gaussbayes {

struct SeriesControl {
  long max_terms = 100000;
  double rel_tol = 1e-12;
  double abs_tol = 1e-300;  // underflow floor

  void validate() const;
};

/// I_n(x) for integer n and real x. Throws RangeError when the result overflows.
double bessel_i(long n, double x, const SeriesControl& ctl = {});

/// e^{-|x|} I_n(x). Finite for every finite x.
double bessel_i_log_scaled(long n, double x, const SeriesControl& ctl = {});

/// e^{-|x|} I_k(x) for k = 0..kmax, one backward recurrence pass.
std::vector<double> bessel_i_scaled_sequence(long kmax, double x, const SeriesControl& ctl = {});

/// 0F1(;b;z).
double hyp0f1(double b, double z, const SeriesControl& ctl = {});

/// Euler gamma; throws DomainError at the poles.
double gamma_fn(double z);

}  // namespace gaussbayes
