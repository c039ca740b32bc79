#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gaussbayes/engine.hpp"
#include "gaussbayes/phase.hpp"

namespace gaussbayes {

enum class TaskKind { DisplacementHet, DisplacementHom, PhaseHet, PhaseHom, Squeeze };

std::string to_string(TaskKind kind);

struct SweepAxis {
  std::string name;  // alpha, alpha2, n, r, psi, sigma0sq, r0, m_rounds
  std::vector<double> values;
};

struct ExperimentConfig {
  TaskKind task = TaskKind::PhaseHet;
  std::vector<SweepAxis> sweep;  // Cartesian product, last axis varies fastest
  Method method = Method::quadrature();
  std::uint64_t seed = 0;
  bool seed_set = false;
  SeriesTruncation truncation;
  std::string output;
  bool force_both_paths = false;

  /// Throws ConfigError.
  void validate() const;
};

/// Flat "key = value" lines; values are a number, a comma list, or start:stop:count.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct ResultRecord {
  TaskKind task = TaskKind::PhaseHet;
  double alpha = 0.0;
  double r = 0.0;
  double psi = 0.0;
  double sigma0sq = 0.0;
  double r0 = 0.0;
  double m_rounds = 0.0;
  double n = 0.0;
  double avg_variance = 0.0;
  double std_error = 0.0;
  std::string method;  // closed_form, series, quadrature, montecarlo
  std::string status = "ok";
  double wall_time = 0.0;
};

struct RunOptions {
  std::size_t threads = 0;
};

std::vector<ResultRecord> run(const ExperimentConfig& config, const RunOptions& opts = {});

/// 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double x);

/// Fixed columns; wall_time is appended only on request because it breaks byte-level reproducibility.
void write_csv(std::ostream& out, const std::vector<ResultRecord>& rows, bool include_wall_time = false);
std::string to_csv(const std::vector<ResultRecord>& rows, bool include_wall_time = false);

// Acceptance suite.

struct Check {
  std::string name;
  double measured = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
  std::string note;
};

struct CriterionResult {
  int id = 0;
  std::string title;
  std::vector<Check> checks;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  bool checks_passed() const;
  bool within_budget() const { return seconds <= budget_seconds; }
  bool passed() const { return checks_passed() && within_budget(); }
};

struct VerifyOptions {
  enum class Suite { Full, Fast };
  Suite suite = Suite::Full;
  std::uint64_t seed = 20240611;
  long mc_samples = 0;  // 0: 100000 (full) or 10000 (fast)
  int truncation = 0;   // non-zero forces SeriesTruncation::N in the series checks
  std::vector<int> only;  // criterion ids; empty runs all
  std::size_t threads = 0;
};

struct VerifyReport {
  std::vector<CriterionResult> criteria;
  bool passed() const;
};

VerifyReport verify(const VerifyOptions& opts = {});

/// One line per criterion, then the failing checks.
void print_report(std::ostream& out, const VerifyReport& report);
/// Per-check CSV without timings, so identical seeds give identical bytes.
void write_report_csv(std::ostream& out, const VerifyReport& report);
std::string report_csv(const VerifyReport& report);

}  // namespace gaussbayes
