#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "gaussbayes/displacement.hpp"
#include "gaussbayes/harness.hpp"
#include "gaussbayes/phase.hpp"
#include "gaussbayes/quadrature.hpp"
#include "gaussbayes/specfun.hpp"
#include "gaussbayes/squeezing.hpp"

namespace gaussbayes {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();
const double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double x, int digits = 6) {
  std::ostringstream os;
  os << std::setprecision(digits) << x;
  return os.str();
}

class Recorder {
 public:
  explicit Recorder(CriterionResult& c) : c_(c) {}

  void close(const std::string& name, double measured, double expected, double tol,
             const std::string& note = {}) {
    const bool ok = std::isfinite(measured) && std::fabs(measured - expected) <= tol;
    c_.checks.push_back({name, measured, expected, tol, ok, note});
  }
  void rel_close(const std::string& name, double measured, double expected, double rel,
                 const std::string& note = {}) {
    close(name, measured, expected, rel * std::fabs(expected), note);
  }
  void at_least(const std::string& name, double measured, double bound, double slack = 0.0,
                const std::string& note = {}) {
    const bool ok = std::isfinite(measured) && measured >= bound - slack;
    c_.checks.push_back({name, measured, bound, slack, ok, note});
  }
  void at_most(const std::string& name, double measured, double bound, double slack = 0.0,
               const std::string& note = {}) {
    const bool ok = std::isfinite(measured) && measured <= bound + slack;
    c_.checks.push_back({name, measured, bound, slack, ok, note});
  }
  void truth(const std::string& name, bool ok, const std::string& note = {}) {
    c_.checks.push_back({name, ok ? 1.0 : 0.0, 1.0, 0.0, ok, note});
  }
  void fail(const std::string& name, const std::string& note) {
    c_.checks.push_back({name, kNaN, kNaN, 0.0, false, note});
  }
  // A thrown error fails the check group instead of the whole suite.
  void guard(const std::string& name, const std::function<void()>& body) {
    try {
      body();
    } catch (const std::exception& e) {
      fail(name, e.what());
    }
  }

 private:
  CriterionResult& c_;
};

struct Ctx {
  VerifyOptions opts;
  bool full = true;
  long samples = 100000;
  EngineOptions eng;
  SeriesTruncation trunc;

  std::uint64_t seed(std::uint64_t k) const { return derive_seed(opts.seed, k); }
};

double sh_at_n(double n, double r, const SeriesTruncation& trunc) {
  const double a2 = n - std::sinh(r) * std::sinh(r);
  if (a2 < 0.0) throw DomainError("photon number below sinh^2(r)");
  const QuadResult q = sh_avg_variance(std::sqrt(a2), r, trunc);
  return q.value;
}

double hom_phase_variance(const ProbeSpec& probe, const EngineOptions& eng) {
  const PhaseTask task{probe, Measurement::homodyne()};
  return phase_avg_variance_numeric(task, Method::quadrature(), 0, eng).value;
}

ProbeSpec probe_at_n(double n, double s, double psi) {
  const double a2 = n - std::sinh(s) * std::sinh(s);
  if (a2 < -1e-12) {
    throw DomainError("no real displacement: n = " + fmt(n) + " is below sinh^2(s) = " +
                      fmt(std::sinh(s) * std::sinh(s)));
  }
  return ProbeSpec{{std::sqrt(std::max(a2, 0.0)), 0.0}, s, psi};
}

// 1

void criterion_1(const Ctx& ctx, Recorder& rec) {
  rec.guard("closed form", [&] { rec.close("het_avg_total_variance(0.25, 0)", het_avg_total_variance(0.25, 0.0), 1.0 / 3.0, 0.0); });
  rec.guard("quadrature engine", [&] {
    const auto v = het_avg_total_variance_numeric(0.25, 0.0, Method::quadrature(), 0, ctx.eng);
    rec.close("quadrature engine vs 1/3", v.value, 1.0 / 3.0, 1e-6);
  });
  rec.guard("monte carlo engine", [&] {
    const auto v = het_avg_total_variance_numeric(0.25, 0.0, Method::monte_carlo(ctx.samples),
                                                  ctx.seed(1), ctx.eng);
    rec.close("monte carlo vs 1/3 (4 SE)", v.value, 1.0 / 3.0, 4.0 * v.std_error,
              std::to_string(ctx.samples) + " samples");
  });
}

// 2

void criterion_2(const Ctx& ctx, Recorder& rec) {
  rec.guard("closed form", [&] {
    const double v = hom_avg_variance_q(1.0, 0.0);
    rec.close("hom_avg_variance_q(1, 0)", v, 0.2, 0.0);
    const double bound = van_trees_bound(fisher_information_prior(GaussianPrior{0.0, 1.0}), 4.0);
    rec.close("van trees saturation", v, bound, 0.0);
  });
  rec.guard("probe qfi", [&] {
    const StateFamily fam = [](double a) { return displace(vacuum(), std::complex<double>(a, 0.0)); };
    rec.close("qfi of displacement along q", qfi_fidelity(fam, 0.3).value, 4.0, 1e-5);
  });
  rec.guard("engine", [&] {
    const auto v = hom_avg_variance_numeric(1.0, 0.0, 0.0, Method::quadrature(), 0, ctx.eng);
    rec.close("quadrature engine vs 0.2", v.value, 0.2, 1e-6);
  });
}

// 3

void criterion_3(const Ctx&, Recorder& rec) {
  const double target = 1.0 / 13.0;
  const double tol = 4.0 * kEps * target;
  rec.guard("chained updates", [&] {
    GaussianPrior p{0.0, 1.0};
    // q-homodyne on vacuum: q / sqrt2 ~ N(alpha_R, 1/4)
    for (double q : {0.3, -1.1, 0.8}) p = gaussian_update(p, q / std::sqrt(2.0), 0.25);
    rec.close("three gaussian_update steps", p.var0, target, tol);
  });
  rec.guard("closed form", [&] {
    rec.close("repeated_variance(1, 0, 3)", repeated_variance(1.0, 0.0, 3), target, tol);
    double v = 1.0;
    for (int i = 0; i < 3; ++i) v = repeated_variance_step(v, 0.0);
    rec.close("repeated_variance_step x3", v, target, tol);
  });
  rec.guard("harness rounds sweep", [&] {
    const auto cfg = parse_config_string("task = DisplacementHom\nm_rounds = 1:5:5\nsigma0sq = 1\nr = 0\n");
    const auto rows = run(cfg);
    if (rows.size() != 5) throw InconsistencyError("expected 5 rows");
    for (int m = 1; m <= 5; ++m) {
      const double want = 1.0 / (1.0 + 4.0 * m);
      rec.close("harness m_rounds=" + std::to_string(m), rows[m - 1].avg_variance, want,
                4.0 * kEps * want);
    }
  });
}

// 4

void criterion_4(const Ctx& ctx, Recorder& rec) {
  int k = 0;
  for (double a2 : {0.5, 1.0, 2.0, 5.0}) {
    const std::string tag = "alpha^2=" + fmt(a2);
    const double alpha = std::sqrt(a2);
    const double closed = (1.0 - std::exp(-a2)) / (2.0 * a2);
    rec.guard(tag, [&] {
      rec.rel_close("ch_avg_variance " + tag, ch_avg_variance(alpha), closed, 1e-13);
      const PhaseTask task{ProbeSpec{{alpha, 0.0}, 0.0, 0.0}, Measurement::heterodyne()};
      const auto mc = phase_avg_variance_numeric(task, Method::monte_carlo(ctx.samples),
                                                 ctx.seed(10 + k), ctx.eng);
      rec.close("monte carlo " + tag + " (4 SE)", mc.value, closed, 4.0 * mc.std_error,
                std::to_string(ctx.samples) + " samples");
      if (ctx.full || a2 == 1.0) {
        const auto q = phase_avg_variance_numeric(task, Method::quadrature(), 0, ctx.eng);
        rec.close("quadrature " + tag, q.value, closed, 1e-6);
      }
    });
    ++k;
  }
  rec.guard("small alpha", [&] {
    rec.close("alpha=1e-6 limit", ch_avg_variance(1e-6), 0.5, 1e-9);
  });
  rec.guard("large n scaling", [&] {
    rec.rel_close("alpha^2=10 vs 1/(2n)", ch_avg_variance(std::sqrt(10.0)), 1.0 / 20.0, 1e-3);
  });
  rec.guard("harness sweep", [&] {
    const auto rows = run(parse_config_string("task = PhaseHet\nalpha2 = 0.5, 1, 2\nr = 0\n"));
    const double a2s[] = {0.5, 1.0, 2.0};
    for (std::size_t i = 0; i < rows.size() && i < 3; ++i) {
      rec.rel_close("harness row alpha^2=" + fmt(a2s[i]), rows[i].avg_variance,
                    (1.0 - std::exp(-a2s[i])) / (2.0 * a2s[i]), 1e-12);
    }
  });
}

// 5

void criterion_5(const Ctx& ctx, Recorder& rec) {
  const SeriesTruncation& tr = ctx.trunc;
  for (double a2 : {0.5, 1.0, 2.0, 5.0}) {
    const std::string tag = "alpha^2=" + fmt(a2);
    rec.guard("reduction " + tag, [&] {
      const double alpha = std::sqrt(a2);
      rec.close("sh(alpha, 0) vs ch " + tag, sh_avg_variance(alpha, 0.0, tr).value,
                ch_avg_variance(alpha), 1e-6);
    });
  }
  rec.guard("grid oracle", [&] {
    const double series = sh_avg_variance(1.0, 0.25, tr).value;
    const PhaseTask task{ProbeSpec{{1.0, 0.0}, 0.25, kPi}, Measurement::heterodyne()};
    const auto grid = phase_avg_variance_numeric(task, Method::quadrature(), 0, ctx.eng);
    rec.close("sh(1, 0.25) vs grid quadrature", series, grid.value, 1e-4);
  });
  const std::vector<double> strong = ctx.full ? std::vector<double>{3, 4, 5, 6} : std::vector<double>{3};
  for (double n : strong) {
    rec.guard("r=1.25 n=" + fmt(n), [&] {
      rec.at_least("r=1.25 worse than r=0 at n=" + fmt(n), sh_at_n(n, 1.25, tr),
                   ch_avg_variance(std::sqrt(n)));
    });
  }
  rec.guard("r=0.75 crossover", [&] {
    const auto gap = [&](double n) { return sh_at_n(n, 0.75, tr) - ch_avg_variance(std::sqrt(n)); };
    double lo = 1.0, hi = 2.0;
    double glo = gap(lo), ghi = gap(hi);
    if (!(glo < 0.0 && ghi > 0.0)) {
      rec.fail("r=0.75 crossover", "no sign change on [1, 2]: " + fmt(glo) + ", " + fmt(ghi));
      return;
    }
    const int iters = ctx.full ? 12 : 6;
    for (int i = 0; i < iters; ++i) {
      const double mid = 0.5 * (lo + hi);
      (gap(mid) < 0.0 ? lo : hi) = mid;
    }
    rec.close("r=0.75 crossover n", 0.5 * (lo + hi), 1.41, 0.1);
  });
  const std::vector<double> weak = ctx.full ? std::vector<double>{0.1, 0.5, 1, 2, 4, 6} : std::vector<double>{0.5, 2};
  for (double n : weak) {
    rec.guard("r=0.25 n=" + fmt(n), [&] {
      rec.at_most("r=0.25 better than r=0 at n=" + fmt(n), sh_at_n(n, 0.25, tr),
                  ch_avg_variance(std::sqrt(n)));
    });
  }
}

// 6

void criterion_6(const Ctx& ctx, Recorder& rec) {
  rec.guard("vacuum", [&] {
    rec.close("vacuum homodyne", hom_phase_variance(ProbeSpec{}, ctx.eng), 0.5, 1e-6);
  });
  std::vector<double> coh_ns = {0.5, 1, 2, 4};
  for (double n : coh_ns) {
    rec.guard("coherent n=" + fmt(n), [&] {
      rec.at_most("coherent homodyne <= heterodyne at n=" + fmt(n),
                  hom_phase_variance(ProbeSpec{{std::sqrt(n), 0.0}, 0.0, 0.0}, ctx.eng),
                  ch_avg_variance(std::sqrt(n)));
    });
  }
  const std::vector<double> sq_ns = ctx.full ? std::vector<double>{1, 1.5, 2, 3, 4} : std::vector<double>{1, 2};
  for (double n : sq_ns) {
    double coherent = kNaN;
    rec.guard("coherent reference n=" + fmt(n), [&] {
      coherent = hom_phase_variance(ProbeSpec{{std::sqrt(n), 0.0}, 0.0, 0.0}, ctx.eng);
    });
    for (double phi : {0.0, kPi / 2.0, kPi}) {
      const std::string tag = "n=" + fmt(n) + " phi=" + fmt(phi, 4);
      rec.guard("squeezed " + tag, [&] {
        rec.at_least("r=0.5 squeezed not better, " + tag,
                     hom_phase_variance(probe_at_n(n, 0.5, phi), ctx.eng), coherent);
      });
    }
  }
  rec.guard("series/quadrature duality", [&] {
    Rng rng(ctx.seed(60));
    std::uniform_real_distribution<double> ua(0.1, 3.0), uq(-4.0, 4.0);
    double worst_p = 0.0, worst_m = 0.0;
    std::string at_p, at_m;
    for (int i = 0; i < 25; ++i) {
      const double a = ua(rng), q = uq(rng);
      const auto integral = [&](auto w) {
        return romberg([&](double t) { return w(t) * hom_likelihood(a, q, t); }, 0.0, kPi, 1e-13, 1e-300, 25)
                   .value / kPi;
      };
      const double p = integral([](double) { return 1.0; });
      const std::complex<double> m(integral([](double t) { return std::cos(t); }) / p,
                                   integral([](double t) { return std::sin(t); }) / p);
      const double ep = std::fabs(hom_pq(a, q, ctx.trunc) - p) / p;
      const double em = std::abs(hom_circular_moment(a, q, ctx.trunc) - m);
      const std::string where = "alpha=" + fmt(a) + " q=" + fmt(q);
      if (ep > worst_p) worst_p = ep, at_p = where;
      if (em > worst_m) worst_m = em, at_m = where;
    }
    rec.close("hom_pq vs theta quadrature, max rel error over 25 points", worst_p, 0.0, 1e-6, at_p);
    rec.close("hom_circular_moment vs theta quadrature, max error over 25 points", worst_m, 0.0, 1e-6, at_m);
  });
}

// 7

void criterion_7(const Ctx& ctx, Recorder& rec) {
  rec.guard("gamma chain vs batch", [&] {
    const GammaPrior prior{2.0, 1.0};
    const std::vector<double> dyadic = {0.5, -1.25, 0.75, 2.0, -0.375};
    GammaPrior chain = prior;
    for (double q : dyadic) chain = vacuum_gamma_update(chain, std::span<const double>(&q, 1));
    const GammaPrior batch = vacuum_gamma_update(prior, dyadic);
    rec.close("shape a, exactly representable outcomes", chain.a, batch.a, 0.0);
    rec.close("rate b, exactly representable outcomes", chain.b, batch.b, 0.0);

    Rng rng(ctx.seed(70));
    std::normal_distribution<double> nd(0.0, 0.7);
    std::vector<double> qs(50);
    for (double& q : qs) q = nd(rng);
    chain = prior;
    for (double q : qs) chain = vacuum_gamma_update(chain, std::span<const double>(&q, 1));
    const GammaPrior b2 = vacuum_gamma_update(prior, qs);
    rec.close("shape a, 50 random outcomes", chain.a, b2.a, 0.0);
    rec.close("rate b, 50 random outcomes", chain.b, b2.b, 8.0 * kEps * b2.b, "summation order only");
  });
  rec.guard("grid vs gamma posterior", [&] {
    const GammaPrior prior{2.0, 1.0};
    const Support sup = Support::interval(-6.0, 3.0);
    const auto grid0 = GridDistribution::tabulate(sup, 4001, [&](double r) { return gamma_density_r(prior, r); });
    Rng rng(ctx.seed(71));
    const ProbeSpec vac{};
    const double r_true = -0.3;
    std::normal_distribution<double> nd(0.0, std::exp(-r_true) / std::sqrt(2.0));
    std::vector<double> qs(5);
    for (double& q : qs) q = nd(rng);
    GridDistribution grid = grid0;
    const LikelihoodFn like = [&](double r, const Outcome& m) { return sq_likelihood(vac, r, m.q()); };
    for (double q : qs) grid = grid_update(grid, like, Outcome::homodyne(q));
    const GammaPrior post = vacuum_gamma_update(prior, qs);
    double worst = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double exact = gamma_density_r(post, grid.nodes()[i]);
      worst = std::max(worst, std::fabs(grid.density()[i] - exact));
      peak = std::max(peak, exact);
    }
    rec.close("max |grid - gamma| / peak density", worst / peak, 0.0, 1e-4);
  });

  const GaussianPrior prior{-0.5, 1.0};
  const auto sq_value = [&](const ProbeSpec& probe) {
    SqueezeTask task;
    task.probe = probe;
    task.prior = prior;
    return sq_avg_variance(task, Method::quadrature(), 0, ctx.eng);
  };
  std::vector<double> ns = ctx.full ? std::vector<double>{0.25, 0.5, 1, 2, 3, 4} : std::vector<double>{1, 2};
  for (double s : {0.0, 0.5, 1.0, 1.5}) {
    std::vector<double> pts;
    const double floor_n = std::sinh(s) * std::sinh(s);
    if (floor_n <= 4.0 && s > 0.0) pts.push_back(floor_n);
    for (double n : ns)
      if (n >= floor_n) pts.push_back(n);
    for (double n : pts) {
      const std::string tag = "s=" + fmt(s) + " n=" + fmt(n);
      rec.guard("van trees " + tag, [&] {
        const auto v = sq_value(probe_at_n(n, s, 0.0));
        rec.at_least("van trees " + tag, v.value, sq_van_trees(n, prior.var0), 3.0 * v.std_error);
      });
    }
  }
  for (double n : {1.0, 2.0}) {
    rec.guard("s=1 vs s=0 n=" + fmt(n), [&] {
      const double coherent = sq_value(probe_at_n(n, 0.0, 0.0)).value;
      const double squeezed = sq_value(probe_at_n(n, 1.0, 0.0)).value;
      rec.at_most("s=1 beats s=0 at n=" + fmt(n), squeezed, coherent);
    });
  }
  const std::vector<double> split_ns = ctx.full ? std::vector<double>{0.25, 1, 2, 4} : std::vector<double>{1};
  for (double n : split_ns) {
    rec.guard("energy split n=" + fmt(n), [&] {
      const EnergySplit es = energy_split_scan(n, prior, 64, Method::quadrature(), 0, ctx.eng);
      const double coherent = sq_value(probe_at_n(n, 0.0, 0.0)).value;
      const double squeezed = sq_value(probe_at_n(n, std::asinh(std::sqrt(n)), 0.0)).value;
      rec.at_most("split minimum <= coherent endpoint, n=" + fmt(n), es.best.value, coherent);
      rec.at_most("split minimum <= squeezed vacuum endpoint, n=" + fmt(n), es.best.value, squeezed);
      rec.at_least("van trees at split minimum, n=" + fmt(n), es.best.value, sq_van_trees(n, prior.var0));
    });
  }
}

// 8

void bessel_invariants(const Ctx&, Recorder& rec) {
  rec.guard("bessel parity", [&] {
    double worst = 0.0;
    for (int n = -20; n <= 20; ++n) {
      for (double x = -30.0; x <= 30.0; x += 0.75) {
        const double a = bessel_i(n, x), b = bessel_i(n, -x);
        const double sign = (n % 2 == 0) ? 1.0 : -1.0;
        if (a != 0.0) worst = std::max(worst, std::fabs(a - sign * b) / std::fabs(a));
      }
    }
    rec.close("I_n(x) = (-1)^n I_n(-x), max rel error", worst, 0.0, 1e-10);
  });
  rec.guard("bessel recurrence", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 15; ++n) {
      for (double x = 0.1; x <= 30.0; x *= 1.15) {
        const double lhs = bessel_i(n - 1, x) - bessel_i(n + 1, x);
        const double rhs = 2.0 * n / x * bessel_i(n, x);
        worst = std::max(worst, std::fabs(lhs - rhs) / std::fabs(rhs));
      }
    }
    rec.close("I_{n-1} - I_{n+1} = (2n/x) I_n, max rel error", worst, 0.0, 1e-8);
  });
  rec.guard("jacobi-anger", [&] {
    bool monotone = true, converged = true;
    for (double x : {0.5, 3.0, 10.0, 20.0}) {
      double prev = std::numeric_limits<double>::infinity();
      for (int big_n = 0; big_n <= 60; ++big_n) {
        double sup = 0.0;
        for (int j = 0; j < 64; ++j) {
          const double t = kPi * j / 63.0;
          double partial = bessel_i(0, x);
          for (int k = 1; k <= big_n; ++k) partial += 2.0 * bessel_i(k, x) * std::cos(k * t);
          sup = std::max(sup, std::fabs(std::exp(x * std::cos(t)) - partial));
        }
        if (sup > prev + 1e-13 * std::exp(x)) monotone = false;
        prev = sup;
      }
      if (prev > 1e-12 * std::exp(x)) converged = false;
    }
    rec.truth("jacobi-anger sup error non-increasing in N", monotone);
    rec.truth("jacobi-anger sup error below 1e-12 e^x at N=60", converged);
  });
  rec.guard("hyp0f1 identity", [&] {
    double worst = std::fabs(hyp0f1(2.0, 0.0) - 1.0);
    for (double z = 0.25; z <= 100.0; z += 0.25) {
      const double x = std::sqrt(z);
      worst = std::max(worst, std::fabs(hyp0f1(2.0, z) - bessel_i(1, 2.0 * x) / x) / hyp0f1(2.0, z));
    }
    rec.close("0F1(;2;x^2) = I_1(2x)/x, max rel error", worst, 0.0, 1e-10);
  });
}

void state_invariants(const Ctx& ctx, Recorder& rec) {
  Rng rng(ctx.seed(80));
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  rec.guard("purity", [&] {
    double worst = 0.0;
    for (int i = 0; i < 200; ++i) {
      GaussianState st = vacuum();
      for (int step = 0; step < 6; ++step) {
        switch (step % 3) {
          case 0: st = displace(st, {2.0 * u(rng), 2.0 * u(rng)}); break;
          case 1: st = squeeze(st, 1.5 * std::fabs(u(rng)), kPi * u(rng)); break;
          default: st = rotate(st, kPi * u(rng)); break;
        }
      }
      worst = std::max(worst, std::fabs(st.det() - 0.25));
    }
    rec.close("det(cov) after random compositions", worst, 0.0, 1e-12);
  });
  rec.guard("fidelity", [&] {
    double asym = 0.0, self = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ProbeSpec a{{u(rng), u(rng)}, std::fabs(u(rng)), kPi * u(rng)};
      const ProbeSpec b{{u(rng), u(rng)}, std::fabs(u(rng)), kPi * u(rng)};
      asym = std::max(asym, std::fabs(fidelity(a.state(), b.state()) - fidelity(b.state(), a.state())));
      self = std::max(self, std::fabs(fidelity(a.state(), a.state()) - 1.0));
    }
    rec.close("fidelity symmetry", asym, 0.0, 1e-12);
    rec.close("unit self-fidelity", self, 0.0, 1e-12);
  });
  rec.guard("wigner normalization", [&] {
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
      const GaussianState st = ProbeSpec{{u(rng), u(rng)}, std::fabs(u(rng)), kPi * u(rng)}.state();
      const double sd = std::sqrt(st.cov.eigenvalues().real().maxCoeff());
      const double ext = 12.0 * sd;
      const int m = 801;
      const double h = 2.0 * ext / (m - 1);
      double acc = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          const Eigen::Vector2d x(st.mean(0) - ext + a * h, st.mean(1) - ext + b * h);
          acc += wigner(st, x);
        }
      worst = std::max(worst, std::fabs(acc * h * h - 1.0));
    }
    rec.close("wigner integral", worst, 0.0, 1e-6);
  });
  rec.guard("mean photon", [&] {
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const ProbeSpec p{{2.0 * u(rng), 2.0 * u(rng)}, 1.5 * std::fabs(u(rng)), kPi * u(rng)};
      worst = std::max(worst, std::fabs(mean_photon(p.state()) - p.mean_photon()));
    }
    rec.close("mean_photon = |alpha|^2 + sinh^2 r", worst, 0.0, 1e-10);
  });
}

void measurement_invariants(const Ctx& ctx, Recorder& rec) {
  const std::vector<ProbeSpec> probes = {
      {{0.0, 0.0}, 0.0, 0.0}, {{0.7, -0.4}, 0.6, 1.1}, {{-1.2, 0.3}, 1.0, -0.5}};
  rec.guard("likelihood normalization", [&] {
    double hom = 0.0, het = 0.0;
    for (const auto& p : probes) {
      const GaussianState st = p.state();
      for (double angle : {0.0, 0.9, 2.0}) {
        const auto mo = homodyne_moments(st, angle);
        const double sd = std::sqrt(mo.var);
        const auto r = romberg([&](double q) { return homodyne_density(st, q, angle); },
                               mo.mean - 14 * sd, mo.mean + 14 * sd, 1e-12);
        hom = std::max(hom, std::fabs(r.value - 1.0));
      }
      const auto hm = heterodyne_moments(st);
      const double sd = std::sqrt(hm.cov.eigenvalues().real().maxCoeff());
      const int m = 601;
      const double ext = 10.0 * sd, h = 2.0 * ext / (m - 1);
      double acc = 0.0;
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b)
          acc += heterodyne_density(st, {hm.mean(0) - ext + a * h, hm.mean(1) - ext + b * h});
      het = std::max(het, std::fabs(acc * h * h - 1.0));
    }
    rec.close("homodyne density integral", hom, 0.0, 1e-9);
    rec.close("heterodyne density integral", het, 0.0, 1e-6);
  });
  rec.guard("heterodyne covariance", [&] {
    double worst = 0.0;
    const GaussianState base = ProbeSpec{{0.0, 0.0}, 0.7, 0.4}.state();
    const std::complex<double> alpha(0.9, -0.6);
    const GaussianState moved = displace(base, alpha);
    for (double re = -2.0; re <= 2.0; re += 0.5)
      for (double im = -2.0; im <= 2.0; im += 0.5) {
        const std::complex<double> beta(re, im);
        worst = std::max(worst, std::fabs(heterodyne_density(moved, beta) - heterodyne_density(base, beta - alpha)));
      }
    rec.close("p_alpha(beta) = p_0(beta - alpha)", worst, 0.0, 1e-14);
  });
  rec.guard("sampler moments", [&] {
    const long n = 100000;
    int k = 0;
    for (const auto& p : probes) {
      const GaussianState st = p.state();
      for (const Measurement& meas : {Measurement::heterodyne(), Measurement::homodyne(0.0), Measurement::homodyne(1.2)}) {
        Rng rng(ctx.seed(90 + k++));
        const int dim = meas.kind == MeasurementKind::Heterodyne ? 2 : 1;
        Eigen::Vector2d mean = Eigen::Vector2d::Zero(), var = Eigen::Vector2d::Zero();
        std::vector<Eigen::Vector2d> xs(n);
        for (long i = 0; i < n; ++i) {
          const Outcome o = sample_outcome(st, meas, rng);
          xs[i] = Eigen::Vector2d(o.value.real(), o.value.imag());
          mean += xs[i];
        }
        mean /= static_cast<double>(n);
        for (const auto& x : xs) var += (x - mean).cwiseProduct(x - mean);
        var /= static_cast<double>(n - 1);
        Eigen::Vector2d want_mean, want_var;
        if (dim == 2) {
          const auto hm = heterodyne_moments(st);
          want_mean = hm.mean;
          want_var = hm.cov.diagonal();
        } else {
          const auto hm = homodyne_moments(st, meas.quadrature_angle);
          want_mean = Eigen::Vector2d(hm.mean, 0.0);
          want_var = Eigen::Vector2d(hm.var, 0.0);
        }
        const std::string tag = std::string(dim == 2 ? "heterodyne" : "homodyne") + " probe " +
                                std::to_string(k);
        for (int c = 0; c < dim; ++c) {
          const double se_mean = std::sqrt(want_var(c) / n);
          const double se_var = want_var(c) * std::sqrt(2.0 / (n - 1));
          rec.close(tag + " mean[" + std::to_string(c) + "]", mean(c), want_mean(c), 4.0 * se_mean);
          rec.close(tag + " var[" + std::to_string(c) + "]", var(c), want_var(c), 4.0 * se_var);
        }
      }
    }
  });
}

void bayes_invariants(const Ctx& ctx, Recorder& rec) {
  rec.guard("conjugacy closure", [&] {
    const GaussianPrior prior{0.3, 0.8};
    const auto grid = GridDistribution::gaussian(prior, 4001, 9.0);
    const double lm = 1.1, lv = 0.4;
    const LikelihoodFn like = [&](double t, const Outcome& m) {
      const double d = m.q() - t;
      return std::exp(-d * d / (2.0 * lv));
    };
    const auto post = grid_update(grid, like, Outcome::homodyne(lm));
    const GaussianPrior exact = gaussian_update(prior, lm, lv);
    const double mean = mean_estimator(post);
    rec.close("grid posterior mean", mean, exact.mu0, 1e-6);
    rec.close("grid posterior variance", variance_mse(post, mean), exact.var0, 1e-6);
    rec.truth("variance contraction", exact.var0 < prior.var0 && exact.var0 < lv);
  });
  rec.guard("circular bounds", [&] {
    double lo = 1.0, hi = 0.0;
    Rng rng(ctx.seed(100));
    std::uniform_real_distribution<double> ua(0.0, 2.5), ub(-3.0, 3.0);
    for (int i = 0; i < 40; ++i) {
      const auto post = ch_posterior(ua(rng), {ub(rng), ub(rng)});
      const auto cm = circular_mean(post);
      const double v = variance_circular(post, cm.value);
      lo = std::min(lo, v), hi = std::max(hi, v);
    }
    rec.at_least("min circular posterior variance", lo, 0.0);
    rec.at_most("max circular posterior variance", hi, 0.5);
    const auto flat = GridDistribution::uniform(Support::circle(-kPi, kPi), 2048);
    rec.close("flat prior circular variance", variance_circular(flat, circular_mean(flat).value), 0.5, 1e-12);
  });
  rec.guard("data processing", [&] {
    const auto het = het_avg_total_variance_numeric(0.7, 0.3, Method::quadrature(), 0, ctx.eng);
    rec.at_most("heterodyne average <= prior total variance", het.value, 1.4);
    const auto sq = [&] {
      SqueezeTask t;
      t.probe = ProbeSpec{{1.0, 0.0}, 0.3, 0.0};
      return sq_avg_variance(t, Method::quadrature(), 0, ctx.eng);
    }();
    rec.at_most("squeezing average <= prior variance", sq.value, 1.0);
    for (const Measurement& meas : {Measurement::heterodyne(), Measurement::homodyne()}) {
      const PhaseTask t{ProbeSpec{{0.8, 0.0}, 0.2, kPi}, meas};
      rec.at_most(std::string("phase average <= 1/2, ") +
                      (meas.kind == MeasurementKind::Heterodyne ? "heterodyne" : "homodyne"),
                  phase_avg_variance_numeric(t, Method::quadrature(), 0, ctx.eng).value, 0.5);
    }
  });
  rec.guard("van trees displacement", [&] {
    for (double r : {0.0, 0.4}) {
      const auto v = hom_avg_variance_numeric(0.5, r, 0.0, Method::quadrature(), 0, ctx.eng);
      rec.at_least("homodyne van trees r=" + fmt(r), v.value,
                   van_trees_bound(2.0, 4.0 * std::exp(2.0 * r)), 3.0 * v.std_error + 1e-12);
    }
  });
  rec.guard("monte carlo vs quadrature", [&] {
    const PhaseTask t{ProbeSpec{{0.8, 0.0}, 0.0, 0.0}, Measurement::homodyne()};
    const auto q = phase_avg_variance_numeric(t, Method::quadrature(), 0, ctx.eng);
    const long n = ctx.full ? 100000 : 20000;
    const auto mc = phase_avg_variance_numeric(t, Method::monte_carlo(n), ctx.seed(101), ctx.eng);
    rec.close("coherent homodyne, monte carlo vs quadrature", mc.value, q.value, 4.0 * mc.std_error);
  });
}

void displacement_invariants(const Ctx& ctx, Recorder& rec) {
  rec.guard("closed forms vs grid_update", [&] {
    Rng rng(ctx.seed(110));
    std::uniform_real_distribution<double> us(0.1, 3.0), ur(0.0, 1.0), uo(-2.0, 2.0);
    const int tuples = ctx.full ? 50 : 10;
    double worst = 0.0;
    for (int i = 0; i < tuples; ++i) {
      DisplacementTask task;
      task.var0 = us(rng);
      task.probe_r = ur(rng);
      const bool het = i % 2 == 0;
      task.measurement = het ? Measurement::heterodyne() : Measurement::homodyne();
      const double o = uo(rng);
      const auto grid = GridDistribution::gaussian(task.prior_real(), 4001, 9.0);
      LikelihoodFn like;
      GaussianPrior exact;
      if (het) {
        const std::complex<double> beta(o, uo(rng));
        like = [&task](double a, const Outcome& m) {
          const auto hm = heterodyne_moments(task.probe_state({a, 0.0}));
          const double d = m.beta().real() - hm.mean(0);
          return std::exp(-d * d / (2.0 * hm.cov(0, 0)));
        };
        exact = het_posterior(task, beta).first;
        const auto post = grid_update(grid, like, Outcome::heterodyne(beta));
        const double mean = mean_estimator(post);
        worst = std::max({worst, std::fabs(mean - exact.mu0), std::fabs(variance_mse(post, mean) - exact.var0)});
      } else {
        like = [&task](double a, const Outcome& m) {
          return homodyne_density(task.probe_state({a, 0.0}), m.q(), 0.0);
        };
        exact = hom_posterior(task, o);
        const auto post = grid_update(grid, like, Outcome::homodyne(o));
        const double mean = mean_estimator(post);
        worst = std::max({worst, std::fabs(mean - exact.mu0), std::fabs(variance_mse(post, mean) - exact.var0)});
      }
    }
    rec.close("posterior moments, max deviation over " + std::to_string(tuples) + " tuples", worst, 0.0, 1e-6);
  });
  rec.guard("homodyne beats heterodyne", [&] {
    double margin = std::numeric_limits<double>::infinity();
    for (double s2 = 0.05; s2 <= 10.0; s2 += 0.05)
      for (double r = 0.0; r <= 5.0; r += 0.1) {
        DisplacementTask task;
        task.var0 = s2;
        task.probe_r = r;
        const double het = het_posterior(task, {0.0, 0.0}).first.var0;
        margin = std::min(margin, het - hom_avg_variance_q(s2, 0.0));
      }
    rec.at_least("min per-coordinate heterodyne minus homodyne variance", margin, 0.0);
  });
  rec.guard("unsqueezed heterodyne is minimal", [&] {
    double margin = std::numeric_limits<double>::infinity();
    for (double s2 : {0.1, 0.25, 1.0, 4.0})
      for (double r = 0.0; r <= 5.0; r += 0.05)
        margin = std::min(margin, het_avg_total_variance(s2, r) - het_avg_total_variance(s2, 0.0));
    rec.at_least("min over r in [0, 5] of V(r) - V(0)", margin, 0.0);
  });
  rec.guard("homodyne saturation", [&] {
    double worst = 0.0;
    for (double s2 : {0.1, 0.5, 2.0})
      for (double r : {0.0, 0.5, 1.3})
        worst = std::max(worst, std::fabs(hom_avg_variance_q(s2, r) - van_trees_bound(1.0 / s2, 4.0 * std::exp(2.0 * r))));
    rec.close("hom_avg_variance_q vs van trees", worst, 0.0, 0.0);
  });
}

void phase_invariants(const Ctx& ctx, Recorder& rec) {
  rec.guard("rotational covariance", [&] {
    const std::size_t nodes = 2048;
    double worst = 0.0, worst_v = 0.0;
    for (int k : {1, 37, 500}) {
      const double phi0 = 2.0 * kPi * k / nodes;
      const std::complex<double> beta(0.8, -0.5);
      const auto a = ch_posterior(1.1, beta, nodes);
      const auto b = ch_posterior(1.1, beta * std::polar(1.0, -phi0), nodes);
      for (std::size_t i = 0; i < nodes; ++i)
        worst = std::max(worst, std::fabs(b.density()[(i + k) % nodes] - a.density()[i]));
      worst_v = std::max(worst_v, std::fabs(sh_vpost(1.1, 0.4, beta, ctx.trunc) -
                                            sh_vpost(1.1, 0.4, beta * std::polar(1.0, -phi0), ctx.trunc)));
    }
    rec.close("shifted posterior density, max deviation", worst, 0.0, 1e-10);
    rec.close("sh_vpost invariant under beta rotation", worst_v, 0.0, 1e-12);
  });
  rec.guard("homodyne blindness", [&] {
    const PhaseTask task{ProbeSpec{{0.9, 0.0}, 0.3, 0.0}, Measurement::homodyne()};
    const auto prior = task.flat_prior();
    const LikelihoodFn like = task.strategy().likelihood();
    double worst = 0.0;
    for (double q : {-1.3, 0.2, 2.1}) {
      const auto a = grid_update(prior, like, Outcome::homodyne(q));
      const auto b = grid_update(prior, like, Outcome::homodyne(-q));
      const std::size_t n = a.size();
      for (std::size_t i = 0; i < n; ++i)
        worst = std::max(worst, std::fabs(a.density()[i] - b.density()[n - 1 - i]));
    }
    rec.close("p(theta | q) = p(pi - theta | -q)", worst, 0.0, 1e-10);
  });
  rec.guard("sh_pbeta duality", [&] {
    double worst = 0.0;
    for (double alpha : {0.1, 1.0, 3.0})
      for (double r : {0.0, 0.6, 1.25})
        for (double b : {0.2, 1.5, 3.5}) {
          const std::complex<double> beta(b, 0.0);
          const double series = sh_pbeta(alpha, r, beta, ctx.trunc);
          const double direct = romberg([&](double t) { return sh_likelihood(alpha, r, beta, t); }, -kPi, kPi, 1e-13, 1e-300, 25).value / (2.0 * kPi);
          worst = std::max(worst, std::fabs(series - direct) / direct);
        }
    rec.close("sh_pbeta vs theta quadrature, max rel error", worst, 0.0, 1e-6);
  });
  rec.guard("sh_avg_variance duality", [&] {
    const std::vector<std::pair<double, double>> pts = ctx.full
        ? std::vector<std::pair<double, double>>{{0.5, 0.5}, {1.5, 1.0}, {2.0, 0.25}}
        : std::vector<std::pair<double, double>>{{0.5, 0.5}};
    for (auto [alpha, r] : pts) {
      const PhaseTask task{ProbeSpec{{alpha, 0.0}, r, kPi}, Measurement::heterodyne()};
      const double grid = phase_avg_variance_numeric(task, Method::quadrature(), 0, ctx.eng).value;
      rec.rel_close("sh_avg_variance vs grid quadrature alpha=" + fmt(alpha) + " r=" + fmt(r),
                    sh_avg_variance(alpha, r, ctx.trunc).value, grid, 1e-6);
    }
  });
}

void squeeze_invariants(const Ctx& ctx, Recorder& rec) {
  Rng rng(ctx.seed(120));
  std::uniform_real_distribution<double> u(0.0, 1.0);
  rec.guard("sq_likelihood normalization", [&] {
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      const ProbeSpec p{{2.0 * u(rng), 0.0}, 1.2 * u(rng), 2.0 * kPi * u(rng)};
      const double r = 2.0 * u(rng) - 1.0;
      const auto st = squeeze_channel(p.state(), r);
      const auto mo = homodyne_moments(st, 0.0);
      const double sd = std::sqrt(mo.var);
      const auto q = romberg([&](double x) { return sq_likelihood(p, r, x); }, mo.mean - 14 * sd, mo.mean + 14 * sd, 1e-13);
      worst = std::max(worst, std::fabs(q.value - 1.0));
    }
    rec.close("integral over q", worst, 0.0, 1e-10);
  });
  rec.guard("hyperbolic trajectory", [&] {
    double worst = 0.0;
    for (int i = 0; i < 50; ++i) {
      const ProbeSpec p{{2.0 * u(rng) - 1.0, 2.0 * u(rng) - 1.0}, u(rng), 2.0 * kPi * u(rng)};
      const auto st = p.state();
      const double before = st.mean(0) * st.mean(1);
      const auto moved = squeeze_channel(st, 3.0 * u(rng) - 1.5);
      worst = std::max(worst, std::fabs(moved.mean(0) * moved.mean(1) - before));
    }
    rec.close("<q><p> invariant", worst, 0.0, 1e-10);
  });
}

void criterion_8(const Ctx& ctx, Recorder& rec) {
  bessel_invariants(ctx, rec);
  state_invariants(ctx, rec);
  measurement_invariants(ctx, rec);
  bayes_invariants(ctx, rec);
  displacement_invariants(ctx, rec);
  phase_invariants(ctx, rec);
  squeeze_invariants(ctx, rec);
}

// 9

void criterion_9(const Ctx& ctx, Recorder& rec) {
  rec.guard("verify determinism", [&] {
    VerifyOptions sub = ctx.opts;
    sub.suite = VerifyOptions::Suite::Fast;
    sub.mc_samples = 10000;
    sub.only = {1, 4};
    const std::string a = report_csv(verify(sub));
    const std::string b = report_csv(verify(sub));
    rec.truth("monte carlo criteria report byte-identical", a == b, std::to_string(a.size()) + " bytes");
  });
  rec.guard("harness determinism", [&] {
    const auto cfg = parse_config_string(
        "task = PhaseHom\nalpha = 0.5:1.5:3\nr = 0, 0.3\nmethod = montecarlo\nsamples = 4000\nseed = " +
        std::to_string(ctx.opts.seed) + "\n");
    RunOptions ro;
    ro.threads = ctx.opts.threads;
    const std::string a = to_csv(run(cfg, ro));
    const std::string b = to_csv(run(cfg, ro));
    rec.truth("harness csv byte-identical", a == b, std::to_string(a.size()) + " bytes");
  });
}

struct CriterionDef {
  int id;
  const char* title;
  double budget;
  void (*body)(const Ctx&, Recorder&);
};

const CriterionDef kCriteria[] = {
    {1, "Displacement/heterodyne closed form and engines", 30, criterion_1},
    {2, "Displacement/homodyne and Van Trees saturation", 10, criterion_2},
    {3, "Repetition law", 1, criterion_3},
    {4, "Phase/heterodyne coherent", 120, criterion_4},
    {5, "Phase/heterodyne squeezed series", 600, criterion_5},
    {6, "Phase/homodyne", 900, criterion_6},
    {7, "Squeezing estimation", 900, criterion_7},
    {8, "Invariant suites", 300, criterion_8},
    {9, "Determinism", 60, criterion_9},
};

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

bool CriterionResult::checks_passed() const {
  if (checks.empty()) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

bool VerifyReport::passed() const {
  return !criteria.empty() &&
         std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed(); });
}

VerifyReport verify(const VerifyOptions& opts) {
  Ctx ctx;
  ctx.opts = opts;
  ctx.full = opts.suite == VerifyOptions::Suite::Full;
  ctx.samples = opts.mc_samples > 0 ? opts.mc_samples : (ctx.full ? 100000 : 10000);
  ctx.eng.threads = opts.threads;
  ctx.trunc.N = opts.truncation;

  VerifyReport report;
  for (const CriterionDef& def : kCriteria) {
    if (!opts.only.empty() && std::find(opts.only.begin(), opts.only.end(), def.id) == opts.only.end()) continue;
    CriterionResult c;
    c.id = def.id;
    c.title = def.title;
    c.budget_seconds = def.budget;
    Recorder rec(c);
    const auto start = std::chrono::steady_clock::now();
    rec.guard("criterion " + std::to_string(def.id), [&] { def.body(ctx, rec); });
    c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.criteria.push_back(std::move(c));
  }
  return report;
}

void print_report(std::ostream& out, const VerifyReport& report) {
  for (const auto& c : report.criteria) {
    const auto ok = std::count_if(c.checks.begin(), c.checks.end(), [](const Check& k) { return k.passed; });
    out << (c.passed() ? "PASS " : "FAIL ") << c.id << ". " << c.title << "  (" << ok << "/"
        << c.checks.size() << " checks, " << std::fixed << std::setprecision(1) << c.seconds << " s of "
        << c.budget_seconds << " s)" << std::defaultfloat << "\n";
    if (!c.within_budget()) out << "    over time budget\n";
    for (const auto& k : c.checks) {
      if (k.passed) continue;
      out << "    failed: " << k.name << ": measured " << fmt(k.measured, 10) << ", expected "
          << fmt(k.expected, 10) << ", tolerance " << fmt(k.tolerance, 3);
      if (!k.note.empty()) out << " [" << k.note << "]";
      out << "\n";
    }
  }
  out << (report.passed() ? "verify: all criteria passed\n" : "verify: FAILED\n");
}

void write_report_csv(std::ostream& out, const VerifyReport& report) {
  out << "criterion,check,measured,expected,tolerance,passed,note\n";
  for (const auto& c : report.criteria)
    for (const auto& k : c.checks)
      out << c.id << ',' << csv_quote(k.name) << ',' << format_double(k.measured) << ','
          << format_double(k.expected) << ',' << format_double(k.tolerance) << ','
          << (k.passed ? "true" : "false") << ',' << csv_quote(k.note) << '\n';
}

std::string report_csv(const VerifyReport& report) {
  std::ostringstream os;
  write_report_csv(os, report);
  return os.str();
}

}  // namespace gaussbayes
