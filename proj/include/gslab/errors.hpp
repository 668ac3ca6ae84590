#pragma once

#include <stdexcept>
#include <string>

namespace gslab {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// No (undershoot, overshoot) amplitude pair exists; signals eps >= eps* or a
/// parameter set outside the existence regime of the requested family.
class BracketNotFound : public Error {
 public:
  using Error::Error;
};

class ShootingError : public Error {
 public:
  using Error::Error;
};

/// A norm integral does not converge for the profile's tail.
class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, double exponent)
      : Error(what), exponent_(exponent) {}
  double exponent() const noexcept { return exponent_; }

 private:
  double exponent_;
};

class InconsistentSolution : public Error {
 public:
  using Error::Error;
};

/// Raised by concentration_lambda when eps is too large for the
/// concentration level to be reached.
class NotAsymptotic : public Error {
 public:
  using Error::Error;
};

class IllConditionedFit : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& field, const std::string& what)
      : Error("parse error in field '" + field + "': " + what), field_(field) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace gslab
