#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "gaussbayes/harness.hpp"

namespace gaussbayes {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

double parse_number(const std::string& text, int line) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
    throw ConfigError("expected a number, got '" + t + "'", line);
  }
  return v;
}

template <class Int>
Int parse_integer(const std::string& text, int line) {
  const std::string t = trim(text);
  Int v = 0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    throw ConfigError("expected an integer, got '" + t + "'", line);
  }
  return v;
}

std::vector<double> parse_values(const std::string& text, int line) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() != 3) throw ConfigError("range must be start:stop:count", line);
    const double start = parse_number(parts[0], line);
    const double stop = parse_number(parts[1], line);
    const long count = parse_integer<long>(parts[2], line);
    if (count < 1) throw ConfigError("range count must be >= 1", line);
    for (long i = 0; i < count; ++i) {
      out.push_back(count == 1 ? start
                               : start + (stop - start) * static_cast<double>(i) /
                                             static_cast<double>(count - 1));
    }
    return out;
  }
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_number(item, line));
  if (out.empty()) throw ConfigError("empty value list", line);
  return out;
}

bool parse_bool(const std::string& text, int line) {
  const std::string t = lower(trim(text));
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ConfigError("expected a boolean, got '" + t + "'", line);
}

TaskKind parse_task(const std::string& text, int line) {
  const std::string t = lower(trim(text));
  if (t == "displacementhet") return TaskKind::DisplacementHet;
  if (t == "displacementhom") return TaskKind::DisplacementHom;
  if (t == "phasehet") return TaskKind::PhaseHet;
  if (t == "phasehom") return TaskKind::PhaseHom;
  if (t == "squeeze") return TaskKind::Squeeze;
  throw ConfigError("unknown task '" + trim(text) + "'", line);
}

const std::map<std::string, std::string>& sweep_aliases() {
  static const std::map<std::string, std::string> names = {
      {"alpha", "alpha"}, {"alpha2", "alpha2"}, {"n", "n"},         {"r", "r"},
      {"s", "r"},         {"psi", "psi"},       {"phi", "psi"},     {"sigma0sq", "sigma0sq"},
      {"r0", "r0"},       {"m_rounds", "m_rounds"}};
  return names;
}

}  // namespace

std::string to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::DisplacementHet: return "DisplacementHet";
    case TaskKind::DisplacementHom: return "DisplacementHom";
    case TaskKind::PhaseHet: return "PhaseHet";
    case TaskKind::PhaseHom: return "PhaseHom";
    case TaskKind::Squeeze: return "Squeeze";
  }
  return "unknown";
}

void ExperimentConfig::validate() const {
  if (sweep.empty()) throw ConfigError("sweep is empty: set at least one of alpha, alpha2, n, r, psi, sigma0sq, r0, m_rounds", 0);
  std::set<std::string> seen;
  for (const SweepAxis& a : sweep) {
    if (a.values.empty()) throw ConfigError("sweep axis '" + a.name + "' has no values", 0);
    seen.insert(a.name);
    for (double v : a.values) {
      if (a.name == "m_rounds" && (v < 0.0 || v != std::floor(v))) {
        throw ConfigError("m_rounds must be non-negative integers", 0);
      }
      if ((a.name == "sigma0sq") && !(v > 0.0)) throw ConfigError("sigma0sq must be positive", 0);
      if ((a.name == "r" || a.name == "alpha" || a.name == "alpha2" || a.name == "n") && v < 0.0) {
        throw ConfigError(a.name + " must be non-negative", 0);
      }
    }
  }
  const int given = static_cast<int>(seen.count("alpha") + seen.count("alpha2") + seen.count("n"));
  if (given > 1) throw ConfigError("alpha, alpha2 and n are mutually exclusive", 0);
  if (method.kind == Method::Kind::MonteCarlo) {
    if (!seed_set) throw ConfigError("MonteCarlo method requires a seed", 0);
    if (method.samples < 2) throw ConfigError("MonteCarlo method requires samples >= 2", 0);
  }
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::set<std::string> keys;
  std::string raw;
  int line = 0;
  bool task_set = false;
  long samples = 0;
  std::string method = "quadrature";
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line);
    std::string key = lower(trim(text.substr(0, eq)));
    const std::string value = trim(text.substr(eq + 1));
    if (key.empty()) throw ConfigError("missing key", line);
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line);
    const auto alias = sweep_aliases().find(key);
    const std::string canonical = alias == sweep_aliases().end() ? key : alias->second;
    if (!keys.insert(canonical).second) throw ConfigError("duplicate key '" + key + "'", line);
    if (alias != sweep_aliases().end()) {
      cfg.sweep.push_back({canonical, parse_values(value, line)});
    } else if (key == "task") {
      cfg.task = parse_task(value, line);
      task_set = true;
    } else if (key == "method") {
      method = lower(value);
      if (method != "quadrature" && method != "montecarlo") {
        throw ConfigError("method must be quadrature or montecarlo", line);
      }
    } else if (key == "samples") {
      samples = parse_integer<long>(value, line);
      if (samples < 2) throw ConfigError("samples must be >= 2", line);
    } else if (key == "seed") {
      cfg.seed = parse_integer<std::uint64_t>(value, line);
      cfg.seed_set = true;
    } else if (key == "truncation") {
      cfg.truncation.N = parse_integer<int>(value, line);
      if (cfg.truncation.N < 1) throw ConfigError("truncation must be >= 1", line);
    } else if (key == "tail_tol") {
      cfg.truncation.tail_tol = parse_number(value, line);
      if (!(cfg.truncation.tail_tol > 0.0)) throw ConfigError("tail_tol must be positive", line);
    } else if (key == "output") {
      cfg.output = value;
    } else if (key == "force_both_paths") {
      cfg.force_both_paths = parse_bool(value, line);
    } else {
      throw ConfigError("unknown key '" + key + "'", line);
    }
  }
  if (!task_set) throw ConfigError("missing 'task'", 0);
  cfg.method = method == "montecarlo" ? Method::monte_carlo(samples > 0 ? samples : 100000)
                                      : Method::quadrature();
  return cfg;
}

ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'", 0);
  return parse_config(in);
}

}  // namespace gaussbayes
