#include "kfr/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "kfr/errors.hpp"
#include "kfr/random.hpp"
#include "kfr/spectral.hpp"
#include "kfr/subspaces.hpp"
#include "kfr/transfer.hpp"

namespace kfr {

namespace {

constexpr std::array<std::string_view, 7> kCommandNames = {"analyze", "equivalence", "transfer", "sweep",
                                                          "spectral", "check", "gen"};

// Tolerances of the invariant checks.
constexpr double kIdentityTol = 1e-10;
constexpr double kProjectionTol = 1e-9;
constexpr double kAgreementTol = 1e-8;
constexpr double kSpectralTol = 1e-9;
constexpr double kParsevalTol = 1e-8;

class Checks {
 public:
  void add(const std::string& name, bool passed, std::optional<double> value = std::nullopt,
           std::optional<double> tolerance = std::nullopt) {
    Json c;
    c["name"] = name;
    c["passed"] = passed;
    c["value"] = value ? Json(*value) : Json(nullptr);
    c["tolerance"] = tolerance ? Json(*tolerance) : Json(nullptr);
    items_.push_back(std::move(c));
    all_passed_ = all_passed_ && passed;
  }
  void below(const std::string& name, double value, double tolerance) {
    add(name, value <= tolerance, value, tolerance);
  }
  const Json& json() const { return items_; }
  bool all_passed() const { return all_passed_; }

 private:
  Json items_ = Json::array();
  bool all_passed_ = true;
};

Json bounds_json(const FrameBounds& b) {
  return Json{{"lower", b.lower},
              {"upper", b.upper},
              {"isFrame", b.is_frame},
              {"isTight", b.is_tight},
              {"isParseval", b.is_parseval}};
}

Json regularity_json(const GramOperator& g) {
  const RegularityReport& r = g.regularity();
  return Json{{"classification", r.classification == Regularity::Regular ? "Regular" : "NearSingular"},
              {"minAbsEigenvalue", r.min_abs_eigenvalue},
              {"maxAbsEigenvalue", r.max_abs_eigenvalue},
              {"conditionNumber", r.condition_number}};
}

Json vector_json(std::span<const double> v) {
  Json a = Json::array();
  for (double x : v) a.push_back(x);
  return a;
}

FrameTolerances frame_tolerances(const ProblemInstance& inst, const CommandFlags& flags) {
  FrameTolerances tol;
  tol.frame = flags.tol.value_or(inst.options.frame_tol);
  if (!(tol.frame > 0.0)) throw Error(ErrorKind::Validation, "--tol must be positive");
  return tol;
}

double scaled(double tol, const Matrix& m) { return tol * std::max(1.0, frobenius_norm(m)); }

void require_nondegenerate(const WeightedSubspaceFamily& f, const GramOperator& g) {
  std::vector<std::string> bad;
  const WeightedSubspaceFamily jf = f.mapped(g.j().matrix());
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (!is_projectively_complete(f.subspaces()[i], g).complete) bad.push_back("V_" + std::to_string(i));
    if (!is_projectively_complete(jf.subspaces()[i], g).complete) bad.push_back("JV_" + std::to_string(i));
  }
  if (bad.empty()) return;
  std::string list;
  for (const std::string& s : bad) list += (list.empty() ? "" : ", ") + s;
  throw Error(ErrorKind::Degeneracy, "subspaces not projectively complete under the W-metric: " + list);
}

Json polar_section(const GramOperator& g, Checks& checks) {
  const std::size_t d = g.dim();
  const Matrix& w = g.w().matrix();
  const Matrix& j = g.j().matrix();
  const Matrix& a = g.abs().matrix();
  const Matrix eye = Matrix::identity(d);
  const double tol = scaled(kIdentityTol, w);
  Json out;
  auto record = [&](const char* name, double value, double t) {
    out[name] = value;
    checks.below(std::string("polar.") + name, value, t);
  };
  record("jSquaredMinusI", frobenius_norm(j * j - eye), kIdentityTol);
  record("jMinusJTransposed", frobenius_norm(j - j.transposed()), kIdentityTol);
  record("jAbsMinusW", frobenius_norm(j * a - w), tol);
  record("absJMinusW", frobenius_norm(a * j - w), tol);
  record("jwMinusWj", frobenius_norm(j * w - w * j), tol);
  record("sqrtSquaredMinusAbs", frobenius_norm(g.sqrt_abs().matrix() * g.sqrt_abs().matrix() - a), tol);
  record("sqrtTimesInverseMinusI",
         frobenius_norm(g.sqrt_abs().matrix() * g.inv_sqrt_abs().matrix() - eye),
         kIdentityTol * std::max(1.0, g.regularity().condition_number));
  const NormEquivalence ne = norm_equivalence_constants(g);
  out["normEquivalence"] = Json{{"lower", ne.lower}, {"upper", ne.upper}};
  return out;
}

Json projections_section(const WeightedSubspaceFamily& f, const GramOperator& g, Checks& checks) {
  Json items = Json::array();
  double worst_defect = 0.0;
  double worst_agreement = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Subspace& v = f.subspaces()[i];
    const Matrix q = j_orthogonal_projection_gram(v, g).matrix;
    const Matrix composed = compose_metric_projections(v, g);
    const double defect = projection_defect(q, g.w().matrix());
    const double agreement = frobenius_norm(q - composed) / std::max(1.0, frobenius_norm(q));
    const Completeness c = is_projectively_complete(v, g);
    worst_defect = std::max(worst_defect, defect);
    worst_agreement = std::max(worst_agreement, agreement);
    items.push_back(Json{{"index", i},
                         {"dimension", v.dim()},
                         {"completenessRatio", c.ratio},
                         {"gramProjectionDefect", defect},
                         {"composedProjectionDefect", projection_defect(composed, g.w().matrix())},
                         {"composedAgreement", agreement}});
  }
  checks.below("projections.gramIdempotentSelfAdjoint", worst_defect, kProjectionTol);
  checks.below("projections.composedAgreesWithGram", worst_agreement, kAgreementTol);
  return items;
}

Json equivalence_section(const WeightedSubspaceFamily& f, const GramOperator& g, const FrameTolerances& tol,
                         Checks& checks) {
  require_nondegenerate(f, g);
  const FourWayReport r = verify_four_way_equivalence(f, g, kAgreementTol, tol);
  static constexpr std::array<const char*, 4> kNames = {"kreinV", "kreinJV", "jHilbertV", "jHilbertJV"};
  Json bounds;
  for (std::size_t k = 0; k < 4; ++k) bounds[kNames[k]] = r.bounds[k] ? bounds_json(*r.bounds[k]) : Json(nullptr);
  checks.add("equivalence.kreinVAgreesKreinJV", r.i_ii_agree);
  checks.add("equivalence.jHilbertVAgreesJHilbertJV", r.iii_iv_agree);
  checks.add("equivalence.kreinAgreesJHilbert", r.i_iii_agree);
  checks.add("equivalence.isFrameAgrees", r.is_frame_agrees);
  checks.add("equivalence.allBoundsAgree", r.theorem_holds, r.max_relative_gap, kAgreementTol);
  return Json{{"bounds", std::move(bounds)}, {"maxRelativeGap", r.max_relative_gap}};
}

Json transfer_section(const WeightedSubspaceFamily& f, const GramOperator& g, const FrameTolerances& tol,
                      Checks& checks) {
  const TransferReport t = transfer_regular(f, g, tol);
  require_nondegenerate(f.mapped(g.inv_sqrt_abs().matrix()), g);
  const TransferPreservation p = check_transfer_preservation(f, g, kAgreementTol, tol);
  checks.add("transfer.certifiedSandwich", t.sandwich_holds);
  checks.add("transfer.forwardPreservesKreinBounds", p.forward_krein_preserved);
  checks.add("transfer.backwardPreservesKreinBounds", p.backward_krein_preserved);
  checks.add("transfer.forwardPreservesJHilbertBounds", p.forward_j_hilbert_preserved);
  checks.add("transfer.backwardPreservesJHilbertBounds", p.backward_j_hilbert_preserved);
  checks.add("transfer.roundTripIdentity", p.round_trip_identity);
  return Json{{"regular",
               Json{{"hilbertBounds", bounds_json(t.hilbert_bounds)},
                    {"kreinBounds", bounds_json(t.krein_bounds)},
                    {"normW", g.norm()},
                    {"normWInverse", g.inverse_norm()},
                    {"certifiedInterval", Json::array({t.certified_low, t.certified_high})},
                    {"unnormalizedInterval", Json::array({t.unnormalized_low, t.unnormalized_high})}}},
              {"maps",
               Json{{"sourceHilbert", bounds_json(p.source_hilbert)},
                    {"imageKrein", bounds_json(p.image_krein)},
                    {"imageJHilbert", bounds_json(p.image_j_hilbert)},
                    {"sourceKrein", bounds_json(p.source_krein)},
                    {"sourceJHilbert", bounds_json(p.source_j_hilbert)},
                    {"preimageHilbert", bounds_json(p.preimage_hilbert)},
                    {"maxRelativeGap", p.max_relative_gap}}}};
}

Json spectral_section(const GramOperator& g, double cluster_tol, Checks& checks, Json& warnings) {
  const SpectralRepresentation rep = spectral_representation(g, cluster_tol);
  for (const std::string& w : rep.warnings) warnings.push_back(w);
  const KreinDecomposition kd = krein_decomposition(g, rep);
  const std::size_t d = g.dim();
  const Matrix& absw = g.abs().matrix();

  Json clusters = Json::array();
  for (const EigenCluster& c : rep.clusters)
    clusters.push_back(Json{{"eigenvalue", c.eigenvalue}, {"multiplicity", c.multiplicity}});

  Matrix all(d, 0);
  Json blocks = Json::array();
  double worst_mult = 0.0, worst_inv = 0.0, worst_iso = 0.0, worst_span = 0.0;
  bool kernel_trivial = true;
  for (std::size_t n = 0; n < rep.blocks.size(); ++n) {
    const SpectralBlock& b = rep.blocks[n];
    const KreinBlock& kb = kd.blocks[n];
    all = Matrix::hstack(all, b.basis);
    const double mult = multiplication_form_residual(g, rep, n);
    const double inv = invariance_residual(g, rep, n);
    worst_mult = std::max(worst_mult, mult);
    worst_inv = std::max(worst_inv, inv);
    worst_iso = std::max(worst_iso, kb.isometry_residual);
    const Subspace h = Subspace::from_orthonormal(b.basis);
    const Subspace hw = Subspace::from_orthonormal(kb.basis);
    if (!same_span(h, hw, kAgreementTol)) worst_span = std::max(worst_span, 1.0);
    Json atoms = Json::array();
    Json weighted = Json::array();
    for (std::size_t k = 0; k < b.measure.atoms.size(); ++k) {
      atoms.push_back(Json{{"location", b.measure.atoms[k].location}, {"mass", b.measure.atoms[k].mass}});
      weighted.push_back(Json{{"location", kb.weighted_measure.atoms[k].location},
                              {"mass", kb.weighted_measure.atoms[k].mass}});
      if (!(std::abs(b.measure.atoms[k].location) > 0.0)) kernel_trivial = false;
    }
    blocks.push_back(Json{{"level", n + 1},
                          {"dimension", b.basis.cols()},
                          {"measure", std::move(atoms)},
                          {"weightedMeasure", std::move(weighted)},
                          {"scaling", vector_json(kb.scaling)},
                          {"multiplicationResidual", mult},
                          {"invarianceResidual", inv},
                          {"isometryResidual", kb.isometry_residual}});
  }

  const double completeness = all.cols() == d ? frobenius_norm(all.transposed() * all - Matrix::identity(d))
                                              : std::numeric_limits<double>::infinity();
  double cross = 0.0;
  for (std::size_t n = 0; n < kd.blocks.size(); ++n)
    for (std::size_t m = n + 1; m < kd.blocks.size(); ++m)
      cross = std::max(cross, max_abs(kd.blocks[n].basis.transposed() * absw * kd.blocks[m].basis));

  const WeightedSubspaceFamily ortho = ortho_basis_of_subspaces(rep);
  const FrameBounds hilbert = frame_bounds(ortho, FrameSetting::hilbert(d));
  std::vector<Subspace> krein_spans;
  for (const KreinBlock& kb : kd.blocks) krein_spans.push_back(Subspace::from_orthonormal(kb.basis));
  std::vector<double> unit_weights(krein_spans.size(), 1.0);
  const WeightedSubspaceFamily krein_family(std::move(unit_weights), std::move(krein_spans));
  const FrameBounds krein = frame_bounds(krein_family, FrameSetting::krein(g));
  const double hilbert_gap = std::max(std::abs(hilbert.lower - 1.0), std::abs(hilbert.upper - 1.0));
  const double krein_gap = std::max(std::abs(krein.lower - 1.0), std::abs(krein.upper - 1.0));

  checks.below("spectral.completeness", completeness, kSpectralTol);
  checks.below("spectral.multiplicationForm", worst_mult, kSpectralTol);
  checks.below("spectral.blockInvariance", worst_inv, kSpectralTol);
  checks.add("spectral.kreinSpanMatchesBlock", worst_span == 0.0);
  checks.below("spectral.weightedIsometry", worst_iso, kSpectralTol);
  checks.below("spectral.blockJOrthogonality", cross, kSpectralTol);
  checks.below("spectral.hilbertParseval", hilbert_gap, kParsevalTol);
  checks.below("spectral.kreinParseval", krein_gap, kParsevalTol);
  checks.add("spectral.trivialKernel", kernel_trivial);

  return Json{{"clusterTol", cluster_tol},
              {"clusters", std::move(clusters)},
              {"maxMultiplicity", rep.max_multiplicity},
              {"blocks", std::move(blocks)},
              {"completenessResidual", completeness},
              {"blockJOrthogonality", cross},
              {"orthoBasisBounds", bounds_json(hilbert)},
              {"kreinBounds", bounds_json(krein)}};
}

Json sweep_section(std::span<const ProblemInstance> instances, const CommandFlags& flags, Checks& checks,
                   Json& warnings) {
  const ProblemInstance& first = instances.front();
  const WeightedSubspaceFamily f = first.family();
  const FrameTolerances tol = frame_tolerances(first, flags);

  GramFamily family;
  std::vector<double> epsilons;
  std::string family_name;
  if (instances.size() > 1) {
    if (!flags.family.empty()) throw Error(ErrorKind::Validation, "--family cannot be combined with a list of instances");
    family_name = "custom";
    std::map<double, SymmetricMatrix> members;
    const std::string first_family = canonical_dump(instance_to_json(first)["subspaces"]) +
                                     canonical_dump(instance_to_json(first)["weights"]);
    for (std::size_t k = 0; k < instances.size(); ++k) {
      const ProblemInstance& inst = instances[k];
      if (inst.dimension != first.dimension)
        throw Error(ErrorKind::Validation, "[" + std::to_string(k) + "].dimension: differs from the first instance");
      const Json doc = instance_to_json(inst);
      if (canonical_dump(doc["subspaces"]) + canonical_dump(doc["weights"]) != first_family)
        warnings.push_back("instance " + std::to_string(k) + ": subspaces and weights ignored; the family of instance 0 is swept");
      const RegularityReport r = GramOperator::build(inst.gram, inst.options.epsilon_threshold).regularity();
      const double eps = r.min_abs_eigenvalue / r.max_abs_eigenvalue;
      if (!members.emplace(eps, inst.gram).second)
        throw Error(ErrorKind::Validation, "[" + std::to_string(k) + "].gram: repeats the epsilon of another instance");
      epsilons.push_back(eps);
    }
    if (flags.epsilons) warnings.push_back("--epsilons ignored: a custom family defines its own epsilons");
    family = [members](double eps) { return GramOperator::build(members.at(eps)); };
  } else {
    if (flags.family == "diag") {
      family_name = "diag";
      family = diagonal_family(first.dimension);
    } else if (flags.family.empty()) {
      family_name = "deflated";
      family = deflated_family(first.gram);
    } else {
      throw Error(ErrorKind::Validation, "--family: unknown family '" + flags.family + "' (expected diag)");
    }
    epsilons = flags.epsilons.value_or(first.options.sweep_epsilons);
  }

  const SweepResult r = singular_sweep(f, family, epsilons, tol);
  Json points = Json::array();
  for (const SweepPoint& p : r.points) {
    Json jp;
    jp["epsilon"] = p.epsilon;
    jp["conditionNumber"] = p.condition_number;
    if (p.krein_bounds) {
      jp["kreinBounds"] = bounds_json(*p.krein_bounds);
      jp["certifiedRatio"] = p.certified_ratio;
      jp["envelope"] = r.envelope_constant * p.epsilon;
      jp["envelopeHolds"] = p.envelope_holds;
      jp["skipped"] = nullptr;
    } else {
      jp["kreinBounds"] = nullptr;
      jp["certifiedRatio"] = nullptr;
      jp["envelope"] = r.envelope_constant * p.epsilon;
      jp["envelopeHolds"] = nullptr;
      jp["skipped"] = p.skipped_reason;
      warnings.push_back("sweep point epsilon=" + Json(p.epsilon).dump() + " skipped: " + p.skipped_reason);
    }
    points.push_back(std::move(jp));
  }
  checks.add("sweep.slopeInRange", r.slope_in_range, r.fitted_slope);
  checks.add("sweep.envelope", r.envelope_holds);
  checks.add("sweep.monotoneDegradation", r.monotone_degradation);
  return Json{{"family", family_name},
              {"hilbertBounds", bounds_json(r.hilbert_bounds)},
              {"maxWeight", r.max_weight},
              {"envelopeConstant", r.envelope_constant},
              {"points", std::move(points)},
              {"fittedSlope", r.fitted_slope},
              {"fittedPoints", r.fitted_points}};
}

Json flags_json(Command command, const CommandFlags& flags) {
  Json j = Json::object();
  if (command == Command::Analyze) j["metric"] = flags.metric;
  if (command == Command::Sweep) {
    j["family"] = flags.family.empty() ? Json(nullptr) : Json(flags.family);
    j["epsilons"] = flags.epsilons ? vector_json(*flags.epsilons) : Json(nullptr);
  }
  j["tol"] = flags.tol ? Json(*flags.tol) : Json(nullptr);
  return j;
}

}  // namespace

std::optional<Command> parse_command(std::string_view name) {
  for (std::size_t k = 0; k < kCommandNames.size(); ++k)
    if (kCommandNames[k] == name) return static_cast<Command>(k);
  return std::nullopt;
}

std::string_view to_string(Command command) { return kCommandNames.at(static_cast<std::size_t>(command)); }

ProblemInstance generate_instance(std::uint64_t seed, std::size_t dim, std::size_t count) {
  if (dim < 1 || dim > 64) throw Error(ErrorKind::Validation, "--dim must be between 1 and 64");
  if (count < 1) throw Error(ErrorKind::Validation, "--subspaces must be at least 1");
  Rng rng(seed);
  ProblemInstance inst;
  inst.dimension = dim;
  inst.gram = random_gram(dim, 10.0, true, rng);
  const std::size_t r = (dim + count - 1) / count;
  std::uniform_real_distribution<double> weight(0.5, 2.0);
  for (std::size_t k = 0; k < count; ++k) {
    const Matrix b = random_subspace(dim, std::min(r, dim), rng).basis();
    std::vector<Vector> columns;
    for (std::size_t j = 0; j < b.cols(); ++j) columns.push_back(b.column(j));
    inst.subspaces.push_back(std::move(columns));
    inst.weights.push_back(weight(rng));
  }
  return inst;
}

CommandResult run_command(Command command, std::span<const ProblemInstance> instances, const CommandFlags& flags) {
  CommandResult result;
  if (command == Command::Gen) {
    const ProblemInstance inst = generate_instance(flags.seed, flags.dim, flags.subspaces);
    result.output = serialize_instance(inst);
    return result;
  }
  if (instances.empty()) throw Error(ErrorKind::Validation, "--input is required for " + std::string(to_string(command)));
  if (instances.size() > 1 && command != Command::Sweep)
    throw Error(ErrorKind::Validation, "a list of instances is only accepted by sweep");

  const ProblemInstance& inst = instances.front();
  Json report;
  report["tool"] = "kfr";
  report["version"] = std::string(version());
  report["command"] = std::string(to_string(command));
  report["instanceDigest"] = instance_digest(instances);
  report["flags"] = flags_json(command, flags);
  Json warnings = Json::array();
  for (const ProblemInstance& i : instances)
    for (const std::string& note : i.notes) warnings.push_back(note);
  Checks checks;

  Json body;
  switch (command) {
    case Command::Analyze: {
      const WeightedSubspaceFamily f = inst.family();
      const FrameTolerances tol = frame_tolerances(inst, flags);
      if (flags.metric == "hilbert") {
        body["analysis"] = Json{{"metric", "hilbert"}, {"bounds", bounds_json(frame_bounds(f, FrameSetting::hilbert(inst.dimension), tol))}};
      } else if (flags.metric == "krein") {
        const GramOperator g = inst.gram_operator();
        body["analysis"] = Json{{"metric", "krein"},
                                {"regularity", regularity_json(g)},
                                {"bounds", bounds_json(frame_bounds(f, FrameSetting::krein(g), tol))}};
      } else {
        throw Error(ErrorKind::Validation, "--metric: expected hilbert or krein, got '" + flags.metric + "'");
      }
      break;
    }
    case Command::Equivalence: {
      const GramOperator g = inst.gram_operator();
      body["regularity"] = regularity_json(g);
      body["equivalence"] = equivalence_section(inst.family(), g, frame_tolerances(inst, flags), checks);
      break;
    }
    case Command::Transfer: {
      const GramOperator g = inst.gram_operator();
      body["regularity"] = regularity_json(g);
      body["transfer"] = transfer_section(inst.family(), g, frame_tolerances(inst, flags), checks);
      break;
    }
    case Command::Sweep:
      body["sweep"] = sweep_section(instances, flags, checks, warnings);
      break;
    case Command::Spectral: {
      const GramOperator g = inst.gram_operator();
      const double cluster_tol = flags.tol.value_or(inst.options.cluster_tol);
      body["regularity"] = regularity_json(g);
      body["spectral"] = spectral_section(g, cluster_tol, checks, warnings);
      break;
    }
    case Command::Check: {
      const GramOperator g = inst.gram_operator();
      const WeightedSubspaceFamily f = inst.family();
      const FrameTolerances tol = frame_tolerances(inst, flags);
      body["regularity"] = regularity_json(g);
      body["polar"] = polar_section(g, checks);
      require_nondegenerate(f, g);
      body["projections"] = projections_section(f, g, checks);
      body["equivalence"] = equivalence_section(f, g, tol, checks);
      if (g.is_regular()) {
        body["transfer"] = transfer_section(f, g, tol, checks);
      } else {
        warnings.push_back("transfer checks skipped: W is NearSingular; run sweep instead");
        body["transfer"] = nullptr;
      }
      body["spectral"] = spectral_section(g, inst.options.cluster_tol, checks, warnings);
      break;
    }
    case Command::Gen:
      break;
  }

  report["warnings"] = std::move(warnings);
  for (auto& [key, value] : body.items()) report[key] = std::move(value);
  report["checks"] = checks.json();
  report["status"] = checks.all_passed() ? "ok" : "check-failed";
  result.exit_status = checks.all_passed() ? 0 : 3;
  result.output = canonical_dump(report);
  result.report = std::move(report);
  return result;
}

}  // namespace kfr
