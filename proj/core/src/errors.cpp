#include "kfr/errors.hpp"

namespace kfr {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Kernel: return "kernel";
    case ErrorKind::Degeneracy: return "degeneracy";
    case ErrorKind::Metric: return "metric";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::NonConvergence: return "non-convergence";
    case ErrorKind::Regularity: return "regularity";
    case ErrorKind::Singular: return "singular";
    case ErrorKind::Invariant: return "invariant";
  }
  return "unknown";
}

int exit_status(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::Dimension:
      return 1;
    case ErrorKind::Invariant:
      return 3;
    default:
      return 2;
  }
}

Error::Error(ErrorKind kind, const std::string& message,
             std::optional<double> residual)
    : std::runtime_error(std::string(to_string(kind)) + " error: " + message),
      kind_(kind),
      residual_(residual) {}

}  // namespace kfr
