#pragma once

#include <stdexcept>
#include <string>

namespace gaussbayes {

// Argument outside the representable range (e.g. e^|x| overflow).
class RangeError : public std::range_error {
 public:
  RangeError(const std::string& what, double argument)
      : std::range_error(what), argument_(argument) {}
  double argument() const { return argument_; }

 private:
  double argument_;
};

// A series or recurrence did not reach its tolerance within the term budget.
class TruncationError : public std::runtime_error {
 public:
  TruncationError(const std::string& what, long terms)
      : std::runtime_error(what), terms_(terms) {}
  long terms() const { return terms_; }

 private:
  long terms_;
};

// Violated precondition on a mathematical argument (poles, bad parameters).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Data incompatible with the model, e.g. an outcome with zero evidence.
class InconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Numerical quadrature failed to meet its tolerance; carries what it got.
class ToleranceError : public std::runtime_error {
 public:
  ToleranceError(const std::string& what, double estimate, double error)
      : std::runtime_error(what), estimate_(estimate), error_(error) {}
  double estimate() const { return estimate_; }
  double error() const { return error_; }

 private:
  double estimate_;
  double error_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace gaussbayes
