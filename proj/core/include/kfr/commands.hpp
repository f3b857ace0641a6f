#pragma once

// The command layer behind the kfr executable. Each command maps onto one
// group of library operations and yields a canonical report plus the
// process exit status: 0 when every check passes, 3 when a check fails.
// Library errors propagate as kfr::Error; their exit status is
// exit_status(kind).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "kfr/io.hpp"

namespace kfr {

enum class Command { Analyze, Equivalence, Transfer, Sweep, Spectral, Check, Gen };

std::optional<Command> parse_command(std::string_view name);
std::string_view to_string(Command command);

struct CommandFlags {
  std::string metric = "hilbert";  // analyze: hilbert | krein
  std::uint64_t seed = 0;
  std::size_t dim = 6;
  std::size_t subspaces = 3;
  std::string family;  // sweep: "" (deflate the instance W) or "diag"
  std::optional<std::vector<double>> epsilons;
  /// Overrides frameTol (clusterTol for spectral).
  std::optional<double> tol;
};

struct CommandResult {
  std::string output;  // canonical text: the report, or the instance for gen
  Json report;         // null for gen
  int exit_status = 0;
};

/// Seeded random instance: an indefinite W with condition number at most 10
/// and `count` random subspaces of dimension ceil(d / count), weights in
/// [0.5, 2].
ProblemInstance generate_instance(std::uint64_t seed, std::size_t dim, std::size_t count);

/// `instances` must be empty for gen and non-empty otherwise; only sweep
/// accepts more than one (a custom W family).
CommandResult run_command(Command command, std::span<const ProblemInstance> instances, const CommandFlags& flags);

}  // namespace kfr
