#include <chrono>
#include <functional>
#include <optional>
#include <cmath>
#include <cstdio>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

#include "gaussbayes/displacement.hpp"
#include "gaussbayes/harness.hpp"
#include "gaussbayes/parallel.hpp"
#include "gaussbayes/squeezing.hpp"

namespace gaussbayes {

namespace {

using Params = std::map<std::string, double>;

std::vector<Params> cartesian(const std::vector<SweepAxis>& axes) {
  std::vector<Params> rows(1);
  for (const SweepAxis& axis : axes) {
    std::vector<Params> next;
    next.reserve(rows.size() * axis.values.size());
    for (const Params& row : rows) {
      for (double v : axis.values) {
        Params p = row;
        p[axis.name] = v;
        next.push_back(std::move(p));
      }
    }
    rows.swap(next);
  }
  return rows;
}

double get(const Params& p, const std::string& key, double fallback) {
  const auto it = p.find(key);
  return it == p.end() ? fallback : it->second;
}

std::string method_tag(const Method& m) {
  return m.kind == Method::Kind::MonteCarlo ? "montecarlo" : "quadrature";
}

struct Path {
  double value;
  double std_error;
  std::string tag;
};

bool is_displacement(TaskKind k) {
  return k == TaskKind::DisplacementHet || k == TaskKind::DisplacementHom;
}

std::vector<ResultRecord> evaluate_row(const ExperimentConfig& cfg, const Params& p,
                                       std::uint64_t seed, std::size_t threads) {
  ResultRecord base;
  base.task = cfg.task;
  base.r = get(p, "r", 0.0);
  base.psi = get(p, "psi", cfg.task == TaskKind::PhaseHet ? std::numbers::pi : 0.0);
  base.sigma0sq = get(p, "sigma0sq", 1.0);
  base.r0 = get(p, "r0", 0.0);
  base.m_rounds = get(p, "m_rounds", 1.0);
  const double sh = std::sinh(base.r);
  if (is_displacement(cfg.task)) {
    base.alpha = 0.0;
  } else if (p.count("alpha2")) {
    base.alpha = std::sqrt(p.at("alpha2"));
  } else if (p.count("n")) {
    const double a2 = p.at("n") - sh * sh;
    base.alpha = a2 >= 0.0 ? std::sqrt(a2) : NAN;
  } else {
    base.alpha = get(p, "alpha", 1.0);
  }
  // swept photon numbers are echoed exactly rather than through sqrt and back
  if (is_displacement(cfg.task)) {
    base.n = sh * sh;
  } else if (p.count("n")) {
    base.n = p.at("n");
  } else if (p.count("alpha2")) {
    base.n = p.at("alpha2") + sh * sh;
  } else {
    base.n = base.alpha * base.alpha + sh * sh;
  }

  const auto start = std::chrono::steady_clock::now();
  std::vector<Path> paths;
  std::string failure;
  EngineOptions opts;
  opts.threads = threads;
  try {
    if (std::isnan(base.alpha)) throw DomainError("n is below sinh^2(r): no feasible displacement");
    std::optional<Path> fast;
    bool engine_available = true;
    std::function<AverageVariance()> engine;
    switch (cfg.task) {
      case TaskKind::DisplacementHet:
        if (base.psi != 0.0) throw DomainError("heterodyne displacement supports psi = 0 only");
        fast = Path{het_avg_total_variance(base.sigma0sq, base.r), 0.0, "closed_form"};
        engine = [&] { return het_avg_total_variance_numeric(base.sigma0sq, base.r, cfg.method, seed, opts); };
        break;
      case TaskKind::DisplacementHom: {
        const int m = static_cast<int>(base.m_rounds);
        const double g = std::cosh(2.0 * base.r) - std::cos(base.psi) * std::sinh(2.0 * base.r);
        const double v = base.psi == 0.0 ? repeated_variance(base.sigma0sq, base.r, m)
                                         : 1.0 / (1.0 / base.sigma0sq + 4.0 * m / g);
        fast = Path{v, 0.0, "closed_form"};
        engine_available = m == 1;
        engine = [&] { return hom_avg_variance_numeric(base.sigma0sq, base.r, base.psi, cfg.method, seed, opts); };
        break;
      }
      case TaskKind::PhaseHet: {
        if (base.r == 0.0) {
          fast = Path{ch_avg_variance(base.alpha), 0.0, "closed_form"};
        } else if (base.psi == std::numbers::pi) {
          fast = Path{sh_avg_variance(base.alpha, base.r, cfg.truncation).value, 0.0, "series"};
        }
        const PhaseTask task{ProbeSpec{{base.alpha, 0.0}, base.r, base.psi}, Measurement::heterodyne()};
        engine = [&, task] { return phase_avg_variance_numeric(task, cfg.method, seed, opts); };
        break;
      }
      case TaskKind::PhaseHom: {
        const PhaseTask task{ProbeSpec{{base.alpha, 0.0}, base.r, base.psi}, Measurement::homodyne(0.0)};
        engine = [&, task] { return phase_avg_variance_numeric(task, cfg.method, seed, opts); };
        break;
      }
      case TaskKind::Squeeze: {
        SqueezeTask task;
        task.probe = ProbeSpec{{base.alpha, 0.0}, base.r, base.psi};
        task.prior = GaussianPrior{base.r0, base.sigma0sq};
        engine = [&, task] { return sq_avg_variance(task, cfg.method, seed, opts); };
        break;
      }
    }
    if (fast) paths.push_back(*fast);
    if (engine_available && (!fast || cfg.force_both_paths)) {
      const AverageVariance v = engine();
      paths.push_back({v.value, v.std_error, method_tag(cfg.method)});
    }
  } catch (const std::exception& e) {
    failure = std::string("error: ") + e.what();
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::vector<ResultRecord> out;
  if (!failure.empty()) {
    ResultRecord r = base;
    r.avg_variance = NAN;
    r.std_error = NAN;
    r.method = "none";
    r.status = failure;
    r.wall_time = elapsed;
    out.push_back(r);
    return out;
  }
  for (const Path& path : paths) {
    ResultRecord r = base;
    r.avg_variance = path.value;
    r.std_error = path.std_error;
    r.method = path.tag;
    r.wall_time = elapsed;
    out.push_back(r);
  }
  if (paths.size() == 2) {
    const double delta = paths[1].value - paths[0].value;
    const double tol = std::max(1e-6 * std::fabs(paths[0].value), 4.0 * paths[1].std_error);
    if (!(std::fabs(delta) <= tol)) out[1].status = "mismatch: delta=" + format_double(delta);
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

}  // namespace

std::vector<ResultRecord> run(const ExperimentConfig& config, const RunOptions& opts) {
  config.validate();
  const std::vector<Params> rows = cartesian(config.sweep);
  std::vector<std::vector<ResultRecord>> results(rows.size());
  const std::size_t threads = opts.threads == 0 ? default_threads() : opts.threads;
  // Rows in parallel with serial engines, or one row with a parallel engine.
  const std::size_t row_threads = rows.size() > 1 ? threads : 1;
  const std::size_t engine_threads = rows.size() > 1 ? 1 : threads;
  parallel_for(rows.size(), row_threads, [&](std::size_t i) {
    results[i] = evaluate_row(config, rows[i], derive_seed(config.seed, i), engine_threads);
  });
  std::vector<ResultRecord> out;
  for (auto& r : results) out.insert(out.end(), r.begin(), r.end());
  return out;
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void write_csv(std::ostream& out, const std::vector<ResultRecord>& rows, bool include_wall_time) {
  out << "task,alpha,r,psi,sigma0sq,r0,m_rounds,n,avg_variance,std_error,method,status";
  if (include_wall_time) out << ",wall_time";
  out << '\n';
  for (const ResultRecord& r : rows) {
    out << to_string(r.task) << ',' << format_double(r.alpha) << ',' << format_double(r.r) << ','
        << format_double(r.psi) << ',' << format_double(r.sigma0sq) << ',' << format_double(r.r0)
        << ',' << format_double(r.m_rounds) << ',' << format_double(r.n) << ','
        << format_double(r.avg_variance) << ',' << format_double(r.std_error) << ','
        << csv_field(r.method) << ',' << csv_field(r.status);
    if (include_wall_time) out << ',' << format_double(r.wall_time);
    out << '\n';
  }
}

std::string to_csv(const std::vector<ResultRecord>& rows, bool include_wall_time) {
  std::ostringstream ss;
  write_csv(ss, rows, include_wall_time);
  return ss.str();
}

}  // namespace gaussbayes
