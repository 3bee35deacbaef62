#pragma once

#include <stdexcept>
#include <string>

namespace jetham {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed expression text. `position` is 1-based character position.
struct SyntaxError : Error {
  SyntaxError(std::string msg, int position, std::string expected)
      : Error("syntax error at position " + std::to_string(position) + ": " + msg +
              " (expected " + expected + ")"),
        position(position),
        expected(std::move(expected)) {}
  int position;
  std::string expected;
};

/// Coordinate reference outside the declared (m, n) ranges, or an unknown head.
struct UnknownCoordinateError : Error {
  UnknownCoordinateError(std::string name, std::string ranges, int position)
      : Error("unknown coordinate '" + name + "' at position " + std::to_string(position) +
              "; valid: " + ranges),
        name(std::move(name)),
        position(position) {}
  std::string name;
  int position;
};

struct ArityError : Error {
  ArityError(const std::string& fn, int got, int position)
      : Error("function '" + fn + "' takes 1 argument, got " + std::to_string(got) +
              " (position " + std::to_string(position) + ")") {}
};

/// Evaluation left the mathematical domain (log of non-positive, division by
/// zero, fractional power of a non-positive base, non-finite result).
struct DomainError : Error {
  DomainError(const std::string& node, double offending)
      : Error("domain error in '" + node + "' (argument " + std::to_string(offending) + ")"),
        node(node),
        offending(offending) {}
  std::string node;
  double offending;
};

struct OrderTooHighError : Error {
  explicit OrderTooHighError(int order)
      : Error("mixed partial of order " + std::to_string(order) + " requested; maximum is 3") {}
};

struct SingularMetricError : Error {
  explicit SingularMetricError(double det)
      : Error("metric is numerically singular (|det| = " + std::to_string(det) + ")") {}
};

struct SingularJacobianError : Error {
  explicit SingularJacobianError(double det)
      : Error("coordinate-change Jacobian is numerically singular (|det| = " +
              std::to_string(det) + ")") {}
};

struct ShapeMismatchError : Error {
  using Error::Error;
};

/// A field was asked for a derivative order beyond what its implementation can
/// stack on top of its own internal differentiation.
struct DepthExceededError : Error {
  DepthExceededError() : Error("field evaluated past the supported differentiation depth") {}
};

/// Scenario file failed to parse or validate (CLI exit code 2).
struct ScenarioError : Error {
  using Error::Error;
};

}  // namespace jetham
