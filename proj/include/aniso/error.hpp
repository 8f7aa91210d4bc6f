#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace aniso {

enum class ErrorKind {
  InvalidInput,
  UndefinedExponent,
  OutOfWindow,
  HypothesisViolated,
  HypothesisNotApplicable,
  Geometry,
  Singularity,
  NonConvergence,
  PropertyViolation,
  Io,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a kind so that callers (the
/// CLI in particular) can map it onto an exit status without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what);

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Non-convergence of an iterative method; keeps the last residual around.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& what, double last_residual, int iterations);

  double last_residual() const noexcept { return last_residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

inline void require(bool cond, ErrorKind kind, const std::string& what) {
  if (!cond) throw Error(kind, what);
}

}  // namespace aniso
