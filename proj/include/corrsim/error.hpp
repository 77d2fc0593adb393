#pragma once

#include <stdexcept>
#include <string>

namespace corrsim {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the domain of an operation (bad parameter, u not in (0,1), ...).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// No joint law exists for the requested constraints, or a free parameter lies
/// outside its feasible range.
class InfeasibleError : public Error {
 public:
  using Error::Error;
};

/// A target correlation lies outside the Frechet-Hoeffding interval of its pair.
class UnachievableCorrelationError : public Error {
 public:
  UnachievableCorrelationError(const std::string& what, double rho, double lo, double hi)
      : Error(what), rho_(rho), lo_(lo), hi_(hi) {}

  double rho() const noexcept { return rho_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double rho_;
  double lo_;
  double hi_;
};

/// Numerical procedure did not reach its tolerance within budget.
class NumericalError : public Error {
 public:
  using Error::Error;
};

/// Problem size above a supported bound.
class CapacityError : public Error {
 public:
  using Error::Error;
};

/// Malformed configuration or data file.
class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace corrsim
