#pragma once

#include <stdexcept>
#include <string>

namespace weylscope {

/// Base class for all engine errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Point outside the chart box, or too close to the boundary for the
/// finite-difference stencil of the requested operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Metric not positive definite (smallest eigenvalue <= 1e-10).
class DegenerateMetricError : public Error {
 public:
  using Error::Error;
};

/// Curvature assembly failed its internal consistency check
/// (first-Bianchi residual far above the finite-difference error bound).
class NumericalInstabilityError : public Error {
 public:
  using Error::Error;
};

/// Curvature data and bivector basis were built at different points/frames.
class FrameMismatchError : public Error {
 public:
  using Error::Error;
};

/// A block that must be trace-free (after removing the scalar part) is not.
class TraceViolationError : public Error {
 public:
  using Error::Error;
};

/// Jacobi iteration failed to reach the off-diagonal target.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

/// The distinguished W+ eigenvalue is not isolated; the eigenform field
/// is gauge and cannot be propagated.
class DegenerateEigenvectorError : public Error {
 public:
  using Error::Error;
};

/// Grid sweep would exceed the configured point budget.
class BudgetExceededError : public Error {
 public:
  using Error::Error;
};

/// Unknown catalog entry name.
class UnknownEntryError : public Error {
 public:
  using Error::Error;
};

/// Patch construction input fails a contract (e.g. analytic derivatives
/// disagreeing with finite differences, invalid domain box).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Metric-definition language: syntax error with position.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error(what), line(line), column(column) {}
  int line;
  int column;
};

/// Metric-definition language: unknown identifier, or a required metric
/// component was never assigned.
class UndefinedSymbolError : public Error {
 public:
  using Error::Error;
};

/// Metric-definition language: g_ij and g_ji both given and different.
class NonSymmetricError : public Error {
 public:
  using Error::Error;
};

}  // namespace weylscope
