#include <gtest/gtest.h>

#include <cmath>

#include "kfr/commands.hpp"
#include "kfr/errors.hpp"
#include "kfr/io.hpp"

using namespace kfr;

namespace {

std::vector<ProblemInstance> load(std::string_view text) { return parse_instances_text(text); }

const Json* find_check(const Json& report, std::string_view name) {
  for (const Json& c : report["checks"])
    if (c["name"] == name) return &c;
  return nullptr;
}

ErrorKind error_of(Command c, std::string_view text, const CommandFlags& flags = {}) {
  try {
    run_command(c, load(text), flags);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "command succeeded";
  return ErrorKind::Invariant;
}

const char* kCoordinateParseval = R"({"dimension": 3, "gram": [[1, 0, 0], [0, 1, 0], [0, 0, 1]],
  "subspaces": [{"basis": [[1, 0, 0]]}, {"basis": [[0, 1, 0]]}, {"basis": [[0, 0, 1]]}],
  "weights": [1, 1, 1]})";

// W = diag(1, -2, 3) with coordinate axes: J-invariant, so every setting agrees.
const char* kAligned = R"({"dimension": 3, "gram": [[1, 0, 0], [0, -2, 0], [0, 0, 3]],
  "subspaces": [{"basis": [[1, 0, 0], [0, 1, 0]]}, {"basis": [[0, 0, 1]]}],
  "weights": [1, 2]})";

}  // namespace

TEST(ParseCommand, Names) {
  EXPECT_EQ(parse_command("sweep"), Command::Sweep);
  EXPECT_EQ(parse_command("gen"), Command::Gen);
  EXPECT_FALSE(parse_command("frobnicate"));
  EXPECT_EQ(to_string(Command::Equivalence), "equivalence");
}

TEST(Analyze, CoordinateParsevalHilbert) {
  const CommandResult r = run_command(Command::Analyze, load(kCoordinateParseval), {});
  EXPECT_EQ(r.exit_status, 0);
  const Json& b = r.report["analysis"]["bounds"];
  EXPECT_NEAR(b["lower"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(b["upper"].get<double>(), 1.0, 1e-12);
  EXPECT_TRUE(b["isParseval"].get<bool>());
  EXPECT_EQ(r.report["status"], "ok");
  EXPECT_EQ(r.report["tool"], "kfr");
  EXPECT_EQ(r.report["command"], "analyze");
  EXPECT_EQ(r.output.back(), '\n');
}

TEST(Analyze, KreinIncludesRegularity) {
  CommandFlags flags;
  flags.metric = "krein";
  const CommandResult r = run_command(Command::Analyze, load(kAligned), flags);
  EXPECT_EQ(r.report["analysis"]["regularity"]["classification"], "Regular");
  EXPECT_EQ(r.report["flags"]["metric"], "krein");
  // weights 1, 2 on |W|-orthogonal coordinate blocks: A = 1, B = 4
  EXPECT_NEAR(r.report["analysis"]["bounds"]["lower"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(r.report["analysis"]["bounds"]["upper"].get<double>(), 4.0, 1e-12);
}

TEST(Analyze, UnknownMetricIsValidation) {
  CommandFlags flags;
  flags.metric = "banach";
  EXPECT_EQ(error_of(Command::Analyze, kCoordinateParseval, flags), ErrorKind::Validation);
}

TEST(Commands, ReportsAreDeterministic) {
  const std::vector<ProblemInstance> inst{generate_instance(7, 5, 2)};
  for (Command c : {Command::Analyze, Command::Equivalence, Command::Transfer, Command::Sweep, Command::Spectral,
                    Command::Check}) {
    const CommandResult a = run_command(c, inst, {});
    const CommandResult b = run_command(c, inst, {});
    EXPECT_EQ(a.output, b.output) << to_string(c);
    EXPECT_EQ(a.exit_status == 0, a.report["status"] == "ok");
  }
}

TEST(Commands, AlignedInstancePassesEverything) {
  const auto inst = load(kAligned);
  for (Command c : {Command::Equivalence, Command::Transfer, Command::Spectral, Command::Check}) {
    const CommandResult r = run_command(c, inst, {});
    EXPECT_EQ(r.exit_status, 0) << to_string(c) << "\n" << r.output;
  }
}

TEST(Commands, MultipleInstancesOnlyForSweep) {
  const std::string two = std::string("[") + kAligned + "," + kAligned + "]";
  EXPECT_EQ(error_of(Command::Analyze, two), ErrorKind::Validation);
  EXPECT_THROW(run_command(Command::Analyze, {}, {}), Error);
}

TEST(Equivalence, DegenerateSubspaceExitsNumerically) {
  // span{(1,1)} is W-neutral for W = diag(1,-1)
  const char* text = R"({"dimension": 2, "gram": [[1, 0], [0, -1]],
    "subspaces": [{"basis": [[1, 1]]}, {"basis": [[1, 0]]}], "weights": [1, 1]})";
  const ErrorKind k = error_of(Command::Equivalence, text);
  EXPECT_EQ(k, ErrorKind::Degeneracy);
  EXPECT_EQ(exit_status(k), 2);
}

TEST(Transfer, NearSingularRejected) {
  const char* text = R"({"dimension": 2, "gram": [[1, 0], [0, 1e-8]],
    "subspaces": [{"basis": [[1, 0]]}, {"basis": [[0, 1]]}], "weights": [1, 1]})";
  const ErrorKind k = error_of(Command::Transfer, text);
  EXPECT_EQ(exit_status(k), 2);
}

TEST(Transfer, CertifiedIntervalReported) {
  const CommandResult r = run_command(Command::Transfer, load(R"({"dimension": 2, "gram": [[2, 0], [0, 3]],
    "subspaces": [{"basis": [[1, 0]]}, {"basis": [[0, 1]]}], "weights": [1, 1]})"), {});
  const Json& interval = r.report["transfer"]["regular"]["certifiedInterval"];
  EXPECT_NEAR(interval[0].get<double>(), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(interval[1].get<double>(), 1.5, 1e-12);
  EXPECT_EQ(r.exit_status, 0);
}

TEST(Sweep, DiagFamilyHasUnitSlope) {
  const char* text = R"({"dimension": 2, "gram": [[1, 0], [0, 1]],
    "subspaces": [{"basis": [[0.7071067811865476, 0.7071067811865476]]},
                  {"basis": [[0.7071067811865476, -0.7071067811865476]]}],
    "weights": [1, 1]})";
  CommandFlags flags;
  flags.family = "diag";
  const CommandResult r = run_command(Command::Sweep, load(text), flags);
  const Json& s = r.report["sweep"];
  EXPECT_EQ(s["family"], "diag");
  EXPECT_NEAR(s["fittedSlope"].get<double>(), 1.0, 0.05);
  EXPECT_TRUE((*find_check(r.report, "sweep.slopeInRange"))["passed"].get<bool>());
  EXPECT_TRUE((*find_check(r.report, "sweep.monotoneDegradation"))["passed"].get<bool>());
  // certified lower bound 2 eps / (1 + eps) exceeds the envelope C eps with C = 1
  EXPECT_FALSE((*find_check(r.report, "sweep.envelope"))["passed"].get<bool>());
  EXPECT_EQ(r.exit_status, 3);
  for (const Json& p : s["points"]) {
    const double eps = p["epsilon"].get<double>();
    EXPECT_NEAR(p["kreinBounds"]["lower"].get<double>(), 2.0 * eps / (1.0 + eps), 1e-9 * eps);
  }
}

TEST(Sweep, CustomEpsilonsAndValidation) {
  CommandFlags flags;
  flags.epsilons = std::vector<double>{1e-1, 1e-2, 1e-3, 1e-4};
  const CommandResult r = run_command(Command::Sweep, load(kAligned), flags);
  EXPECT_EQ(r.report["sweep"]["points"].size(), 4u);
  EXPECT_EQ(r.report["flags"]["epsilons"].size(), 4u);
  flags.epsilons = std::vector<double>{1e-1, 1e-2, 1e-3};
  EXPECT_THROW(run_command(Command::Sweep, load(kAligned), flags), Error);
  flags.epsilons = std::vector<double>{1e-1, 1e-1, 1e-3, 1e-4};
  EXPECT_THROW(run_command(Command::Sweep, load(kAligned), flags), Error);
  flags.epsilons = std::vector<double>{1e-1, 1e-2, 1e-3, 1e-13};
  EXPECT_THROW(run_command(Command::Sweep, load(kAligned), flags), Error);
  flags.epsilons = std::vector<double>{1e-1, 5e-2, 2e-2, 1e-2};
  EXPECT_THROW(run_command(Command::Sweep, load(kAligned), flags), Error);

  // given out of order, reported decreasing
  flags.epsilons = std::vector<double>{1e-4, 1e-1, 1e-3, 1e-2};
  const CommandResult sorted = run_command(Command::Sweep, load(kAligned), flags);
  EXPECT_EQ(sorted.report["sweep"]["points"][0]["epsilon"], 1e-1);
  EXPECT_EQ(sorted.report["sweep"]["points"][3]["epsilon"], 1e-4);
}

// A loose tolerance merges 1 and 1 + 1e-6; the merged cluster value then
// misrepresents both, which the residual checks report.
TEST(Spectral, ToleranceOverride) {
  CommandFlags flags;
  flags.tol = 1e-4;
  const CommandResult r = run_command(Command::Spectral, load(R"({"dimension": 3,
    "gram": [[1, 0, 0], [0, 1.000001, 0], [0, 0, -2]],
    "subspaces": [{"basis": [[1, 0, 0]]}], "weights": [1]})"), flags);
  EXPECT_EQ(r.report["spectral"]["maxMultiplicity"], 2);
  EXPECT_EQ(r.report["flags"]["tol"], 1e-4);
  const Json* mult = find_check(r.report, "spectral.multiplicationForm");
  ASSERT_NE(mult, nullptr);
  EXPECT_FALSE((*mult)["passed"].get<bool>());
  EXPECT_NEAR((*mult)["value"].get<double>(), 5e-7, 1e-9);
  EXPECT_EQ(r.exit_status, 3);

  const CommandResult tight = run_command(Command::Spectral, load(R"({"dimension": 3,
    "gram": [[1, 0, 0], [0, 1.000001, 0], [0, 0, -2]],
    "subspaces": [{"basis": [[1, 0, 0]]}], "weights": [1]})"), {});
  EXPECT_EQ(tight.report["spectral"]["maxMultiplicity"], 1);
  EXPECT_EQ(tight.exit_status, 0) << tight.output;
}

TEST(Check, GeneratedInstanceFailsOnlyTheCompositionClaims) {
  const CommandResult r = run_command(Command::Check, std::vector<ProblemInstance>{generate_instance(42, 6, 3)}, {});
  for (const Json& c : r.report["checks"]) {
    const std::string name = c["name"];
    const bool expected_red = name == "projections.composedAgreesWithGram" ||
                              name == "equivalence.kreinAgreesJHilbert" ||
                              name == "equivalence.kreinVAgreesKreinJV" ||
                              name == "equivalence.allBoundsAgree" || name == "transfer.certifiedSandwich" ||
                              name == "transfer.forwardPreservesKreinBounds" ||
                              name == "transfer.backwardPreservesKreinBounds";
    if (!expected_red) EXPECT_TRUE(c["passed"].get<bool>()) << name;
  }
}

TEST(Gen, ValidatesDimension) {
  EXPECT_THROW(generate_instance(1, 0, 1), Error);
  EXPECT_THROW(generate_instance(1, 65, 1), Error);
  EXPECT_THROW(generate_instance(1, 3, 0), Error);
  const ProblemInstance inst = generate_instance(1, 4, 3);
  EXPECT_EQ(inst.subspaces.size(), 3u);
  EXPECT_EQ(inst.subspaces[0].size(), 2u);
}
