#pragma once

// Instance files and canonical JSON output.
//
// An instance is a single JSON object:
//   {"dimension": d, "gram": [[...], ...], "subspaces": [{"basis": [[...], ...]}, ...],
//    "weights": [...], "options": {"epsilonThreshold", "clusterTol", "frameTol", "sweepEpsilons"}}
// where each basis entry is one column vector. A file may also hold an array
// of instances (a custom sweep family).

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "kfr/fusion.hpp"
#include "kfr/krein.hpp"
#include "kfr/linalg.hpp"

namespace kfr {

using Json = nlohmann::ordered_json;

std::string_view version();
/// Largest |gram[i][j] - gram[j][i]| (relative to max(1, max|gram|)) that is
/// silently symmetrized by averaging.
inline constexpr double kSymmetrizeTol = 1e-12;

struct InstanceOptions {
  double epsilon_threshold = kDefaultEpsilonThreshold;
  double cluster_tol = 1e-8;
  double frame_tol = 1e-10;
  std::vector<double> sweep_epsilons = {1e-1, 1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
};

struct ProblemInstance {
  std::size_t dimension = 0;
  SymmetricMatrix gram;
  std::vector<std::vector<Vector>> subspaces;  // spanning columns as given
  std::vector<double> weights;
  InstanceOptions options;
  /// Parse-time notes (symmetrization) that belong in every report.
  std::vector<std::string> notes;

  WeightedSubspaceFamily family() const;
  GramOperator gram_operator() const;
};

/// Throws Parse (with line and column) for malformed JSON and Validation
/// (naming the offending field) for structural problems.
ProblemInstance parse_instance_text(std::string_view text);
ProblemInstance parse_instance(const std::filesystem::path& path);
/// Accepts a single instance or a non-empty array of instances.
std::vector<ProblemInstance> parse_instances_text(std::string_view text);
std::vector<ProblemInstance> parse_instances(const std::filesystem::path& path);

Json instance_to_json(const ProblemInstance& instance);
std::string serialize_instance(const ProblemInstance& instance);

/// Canonical text: two-space indentation, arrays of scalars on one line,
/// floating point numbers as %.16e (17 significant digits), non-finite
/// numbers as null, trailing newline.
std::string canonical_dump(const Json& value);

std::string sha256_hex(std::string_view data);
/// "sha256:" + digest of the canonical serialization of every instance.
std::string instance_digest(std::span<const ProblemInstance> instances);

/// Comma separated reals, e.g. "1e-1,1e-2". Throws Validation.
std::vector<double> parse_csv_doubles(std::string_view text, std::string_view field);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace kfr
