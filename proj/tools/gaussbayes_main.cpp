// gaussbayes: sweep runner and acceptance suite.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "gaussbayes/errors.hpp"
#include "gaussbayes/harness.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 1;
constexpr int kVerifyFailed = 2;

int write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return kOk;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "gaussbayes: cannot write '" << path << "'\n";
    return kConfigError;
  }
  out << text;
  return out ? kOk : kConfigError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian estimation with single-mode Gaussian probes"};
  app.require_subcommand(1);

  std::optional<std::uint64_t> seed;
  std::string method;
  long samples = 0;
  std::string out_path;
  bool force_both = false;
  std::size_t threads = 0;

  auto* run_cmd = app.add_subcommand("run", "evaluate a sweep config and write CSV");
  std::string config_path;
  bool timing = false;
  run_cmd->add_option("config", config_path, "config file")->required();
  run_cmd->add_option("--seed", seed, "master seed (overrides config)");
  run_cmd->add_option("--method", method, "quadrature or montecarlo (overrides config)")
      ->check(CLI::IsMember({"quadrature", "montecarlo"}));
  run_cmd->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::Range(2L, 1L << 40));
  run_cmd->add_option("--out", out_path, "CSV path, '-' for stdout (overrides config)");
  run_cmd->add_flag("--force-both-paths", force_both, "evaluate closed form and engine on every row");
  run_cmd->add_flag("--timing", timing, "append a wall_time column");
  run_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");

  auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
  std::string suite = "full";
  int truncation = 0;
  std::vector<int> only;
  verify_cmd->add_option("--suite", suite, "full or fast")->check(CLI::IsMember({"full", "fast"}));
  verify_cmd->add_option("--seed", seed, "master seed");
  verify_cmd->add_option("--samples", samples, "Monte Carlo samples per check")->check(CLI::Range(2L, 1L << 40));
  verify_cmd->add_option("--out", out_path, "per-check CSV report");
  verify_cmd->add_option("--truncation", truncation, "force the Bessel-sum cutoff N")->check(CLI::PositiveNumber);
  verify_cmd->add_option("--only", only, "criterion ids")->delimiter(',');
  verify_cmd->add_option("--threads", threads, "worker threads, 0 = all cores");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }

  using namespace gaussbayes;

  if (*run_cmd) {
    ExperimentConfig cfg;
    try {
      cfg = load_config(config_path);
      if (seed) cfg.seed = *seed, cfg.seed_set = true;
      if (!method.empty()) {
        cfg.method = method == "montecarlo" ? Method::monte_carlo(cfg.method.samples > 0 ? cfg.method.samples : 100000)
                                            : Method::quadrature();
      }
      if (samples > 0) {
        if (cfg.method.kind != Method::Kind::MonteCarlo) throw ConfigError("--samples needs --method montecarlo", 0);
        cfg.method.samples = samples;
      }
      if (force_both) cfg.force_both_paths = true;
      if (!out_path.empty()) cfg.output = out_path;
      cfg.validate();
    } catch (const ConfigError& e) {
      std::cerr << "gaussbayes: " << config_path << ": " << e.what() << "\n";
      return kConfigError;
    }
    RunOptions ro;
    ro.threads = threads;
    const auto rows = run(cfg, ro);
    const int rc = write_output(cfg.output, to_csv(rows, timing));
    for (const auto& row : rows)
      if (row.status != "ok") std::cerr << "gaussbayes: row status " << row.status << "\n";
    return rc;
  }

  VerifyOptions vo;
  vo.suite = suite == "fast" ? VerifyOptions::Suite::Fast : VerifyOptions::Suite::Full;
  if (seed) vo.seed = *seed;
  vo.mc_samples = samples;
  vo.truncation = truncation;
  vo.only = only;
  vo.threads = threads;
  const VerifyReport report = verify(vo);
  print_report(std::cout, report);
  if (!out_path.empty() && write_output(out_path, report_csv(report)) != kOk) return kConfigError;
  return report.passed() ? kOk : kVerifyFailed;
}
