#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace gaussbayes {

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
  bool converged = false;
};

/// Romberg integration on [a, b]: trapezoid step halving plus a Richardson table.
template <class F>
QuadResult romberg(F&& f, double a, double b, double rel_tol = 1e-10, double abs_tol = 1e-15,
                   int max_levels = 22, int min_levels = 5) {
  QuadResult res;
  std::vector<double> prev, cur;
  double h = b - a;
  double trap = 0.5 * h * (f(a) + f(b));
  res.evaluations = 2;
  prev.push_back(trap);
  long intervals = 1;
  for (int level = 1; level < max_levels; ++level) {
    h *= 0.5;
    double mid = 0.0;
    for (long i = 0; i < intervals; ++i) {
      mid += f(a + (2.0 * static_cast<double>(i) + 1.0) * h);
    }
    res.evaluations += intervals;
    intervals *= 2;
    cur.assign(static_cast<std::size_t>(level) + 1, 0.0);
    cur[0] = 0.5 * prev[0] + h * mid;
    double factor = 1.0;
    for (int j = 1; j <= level; ++j) {
      factor *= 4.0;
      cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (factor - 1.0);
    }
    res.value = cur[level];
    res.error = std::fabs(cur[level] - prev[level - 1]);
    if (level >= min_levels && res.error <= std::max(abs_tol, rel_tol * std::fabs(res.value))) {
      res.converged = true;
      return res;
    }
    prev.swap(cur);
  }
  return res;
}

/// Trapezoid weights for strictly increasing nodes; periodic treats the span
/// [nodes.front(), nodes.front() + period) as a circle.
inline std::vector<double> trapezoid_weights(const std::vector<double>& nodes, bool periodic,
                                             double period = 0.0) {
  const std::size_t n = nodes.size();
  std::vector<double> w(n, 0.0);
  if (n < 2) {
    if (n == 1) w[0] = periodic ? period : 0.0;
    return w;
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double half = 0.5 * (nodes[i + 1] - nodes[i]);
    w[i] += half;
    w[i + 1] += half;
  }
  if (periodic) {
    const double half = 0.5 * (nodes.front() + period - nodes.back());
    w.front() += half;
    w.back() += half;
  }
  return w;
}

}  // namespace gaussbayes
