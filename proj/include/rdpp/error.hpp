#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace rdpp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of a formula (e.g. the Holling pole u = -h).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// Numerical guard tripped: blow-up, negativity beyond round-off, bound violation.
class NumericGuardError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public NumericGuardError {
 public:
  ConvergenceError(const std::string& what, std::vector<double> distances)
      : NumericGuardError(what), distances_(std::move(distances)) {}
  const std::vector<double>& distances() const { return distances_; }

 private:
  std::vector<double> distances_;
};

/// Bisection bracket without a sign change of the stability indicator.
class NoSignChangeError : public Error {
 public:
  NoSignChangeError(const std::string& what, double f_lo, double f_hi)
      : Error(what), f_lo_(f_lo), f_hi_(f_hi) {}
  double f_lo() const { return f_lo_; }
  double f_hi() const { return f_hi_; }

 private:
  double f_lo_;
  double f_hi_;
};

class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace rdpp
