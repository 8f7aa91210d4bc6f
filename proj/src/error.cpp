#include "aniso/error.hpp"

namespace aniso {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::UndefinedExponent: return "undefined-exponent";
    case ErrorKind::OutOfWindow: return "out-of-window";
    case ErrorKind::HypothesisViolated: return "hypothesis-violated";
    case ErrorKind::HypothesisNotApplicable: return "hypothesis-not-applicable";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Singularity: return "singularity";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::PropertyViolation: return "property-violation";
    case ErrorKind::Io: return "io";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& what)
    : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

NonConvergenceError::NonConvergenceError(const std::string& what, double last_residual,
                                         int iterations)
    : Error(ErrorKind::NonConvergence,
            what + " (last residual " + std::to_string(last_residual) + " after " +
                std::to_string(iterations) + " iterations)"),
      last_residual_(last_residual),
      iterations_(iterations) {}

}  // namespace aniso
