#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace kfr {

enum class ErrorKind {
  Parse,           // malformed input document
  Validation,      // structurally invalid instance or argument
  Dimension,       // operand sizes disagree
  Kernel,          // Gram operator has a (numerically) nontrivial kernel
  Degeneracy,      // subspace is not projectively complete under the W-metric
  Metric,          // metric matrix is not positive definite
  Domain,          // scalar function undefined at an eigenvalue
  NonConvergence,  // iteration cap reached
  Regularity,      // operation needs a Regular / above-floor Gram operator
  Singular,        // linear map is numerically singular
  Invariant,       // constructed object fails its defining identities
};

std::string_view to_string(ErrorKind kind);

/// Process exit status for an error of this kind: 1 for input problems,
/// 2 for numerical failures, 3 for failed identities.
int exit_status(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message,
        std::optional<double> residual = std::nullopt);

  ErrorKind kind() const noexcept { return kind_; }
  /// Diagnostic value attached by numerical routines (off-diagonal residual,
  /// condition number, offending eigenvalue).
  std::optional<double> residual() const noexcept { return residual_; }

 private:
  ErrorKind kind_;
  std::optional<double> residual_;
};

}  // namespace kfr
