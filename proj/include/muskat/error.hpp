#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace muskat {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A caller-supplied argument violates a documented precondition.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The curve is not a graph over x: dz1/dalpha <= 0 at the listed nodes.
class NotAGraph : public Error {
 public:
  explicit NotAGraph(std::vector<std::size_t> nodes);
  const std::vector<std::size_t>& nodes() const noexcept { return nodes_; }

 private:
  std::vector<std::size_t> nodes_;
};

/// Smallest kernel denominator cosh(dz2) - cos(dz1) seen over evaluated pairs.
struct ArcChordReport {
  double min_denominator = 0.0;
  std::size_t i = 0;
  std::size_t j = 0;
};

/// The singular kernel denominator dropped under the floor: the curve is
/// (nearly) self-intersecting.
class ArcChordFailure : public Error {
 public:
  explicit ArcChordFailure(const ArcChordReport& report);
  const ArcChordReport& report() const noexcept { return report_; }

 private:
  ArcChordReport report_;
};

class PreconditionViolated : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  QuadratureNotConverged(double estimate, double error_estimate);
  double estimate() const noexcept { return estimate_; }
  double error_estimate() const noexcept { return error_; }

 private:
  double estimate_;
  double error_;
};

/// NaN or overflow in the time stepper.
class NumericalFailure : public Error {
 public:
  using Error::Error;
};

/// Malformed or invalid run configuration. line() is 0 when the problem is
/// not tied to a source line (e.g. a validation failure).
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace muskat
