#include "kfr/io.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "kfr/errors.hpp"

namespace kfr {

std::string_view version() { return KFR_VERSION_STRING; }

WeightedSubspaceFamily ProblemInstance::family() const {
  std::vector<Subspace> spans;
  spans.reserve(subspaces.size());
  for (const auto& columns : subspaces) spans.push_back(Subspace::span(columns));
  return {weights, std::move(spans)};
}

GramOperator ProblemInstance::gram_operator() const {
  return GramOperator::build(gram, options.epsilon_threshold);
}

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& what) {
  throw Error(ErrorKind::Validation, field + ": " + what);
}

double read_real(const Json& v, const std::string& field) {
  if (!v.is_number()) invalid(field, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) invalid(field, "must be finite");
  return x;
}

double read_positive(const Json& v, const std::string& field) {
  const double x = read_real(v, field);
  if (!(x > 0.0)) invalid(field, "must be positive");
  return x;
}

Vector read_vector(const Json& v, std::size_t d, const std::string& field) {
  if (!v.is_array()) invalid(field, "expected an array of numbers");
  if (v.size() != d) invalid(field, "expected " + std::to_string(d) + " entries, found " + std::to_string(v.size()));
  Vector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = read_real(v[i], field + "[" + std::to_string(i) + "]");
  return out;
}

InstanceOptions read_options(const Json& v) {
  InstanceOptions o;
  if (!v.is_object()) invalid("options", "expected an object");
  for (const auto& [key, value] : v.items()) {
    const std::string field = "options." + key;
    if (key == "epsilonThreshold") {
      o.epsilon_threshold = read_positive(value, field);
    } else if (key == "clusterTol") {
      o.cluster_tol = read_positive(value, field);
    } else if (key == "frameTol") {
      o.frame_tol = read_positive(value, field);
    } else if (key == "sweepEpsilons") {
      if (!value.is_array() || value.empty()) invalid(field, "expected a non-empty array of numbers");
      o.sweep_epsilons.clear();
      for (std::size_t i = 0; i < value.size(); ++i)
        o.sweep_epsilons.push_back(read_positive(value[i], field + "[" + std::to_string(i) + "]"));
    } else {
      invalid(field, "unknown option");
    }
  }
  return o;
}

ProblemInstance read_instance(const Json& doc, const std::string& prefix) {
  if (!doc.is_object()) invalid(prefix.empty() ? "instance" : prefix, "expected an object");
  auto field = [&](const std::string& name) { return prefix.empty() ? name : prefix + "." + name; };
  for (const auto& [key, value] : doc.items()) {
    (void)value;
    if (key != "dimension" && key != "gram" && key != "subspaces" && key != "weights" && key != "options")
      invalid(field(key), "unknown key");
  }
  for (const char* key : {"dimension", "gram", "subspaces", "weights"})
    if (!doc.contains(key)) invalid(field(key), "missing");

  ProblemInstance inst;
  const Json& dim = doc["dimension"];
  if (!dim.is_number_integer() || dim.get<long long>() < 1) invalid(field("dimension"), "expected a positive integer");
  inst.dimension = dim.get<std::size_t>();
  const std::size_t d = inst.dimension;

  const Json& gram = doc["gram"];
  if (!gram.is_array() || gram.size() != d)
    invalid(field("gram"), "expected " + std::to_string(d) + " rows");
  Matrix g(d, d);
  for (std::size_t i = 0; i < d; ++i) {
    const Vector row = read_vector(gram[i], d, field("gram") + "[" + std::to_string(i) + "]");
    for (std::size_t j = 0; j < d; ++j) g(i, j) = row[j];
  }
  const double scale = std::max(1.0, max_abs(g));
  inst.gram = SymmetricMatrix(std::move(g));
  const double asym = inst.gram.asymmetry_before_averaging();
  if (asym > kSymmetrizeTol * scale) {
    std::ostringstream msg;
    msg << "not symmetric (max |gram[i][j] - gram[j][i]| = " << asym << ")";
    invalid(field("gram"), msg.str());
  }
  if (asym > 0.0) {
    std::ostringstream msg;
    msg << field("gram") << " symmetrized by averaging (max asymmetry " << asym << ")";
    inst.notes.push_back(msg.str());
  }

  const Json& subspaces = doc["subspaces"];
  if (!subspaces.is_array() || subspaces.empty()) invalid(field("subspaces"), "expected a non-empty array");
  for (std::size_t k = 0; k < subspaces.size(); ++k) {
    const std::string sf = field("subspaces") + "[" + std::to_string(k) + "]";
    const Json& s = subspaces[k];
    if (!s.is_object() || !s.contains("basis")) invalid(sf, "expected an object with a basis");
    if (s.size() != 1) invalid(sf, "only the key basis is allowed");
    const Json& basis = s["basis"];
    if (!basis.is_array() || basis.empty()) invalid(sf + ".basis", "expected a non-empty list of column vectors");
    std::vector<Vector> columns;
    for (std::size_t j = 0; j < basis.size(); ++j)
      columns.push_back(read_vector(basis[j], d, sf + ".basis[" + std::to_string(j) + "]"));
    if (Subspace::span(columns).empty()) invalid(sf + ".basis", "spans the zero subspace");
    inst.subspaces.push_back(std::move(columns));
  }

  const Json& weights = doc["weights"];
  if (!weights.is_array()) invalid(field("weights"), "expected an array of numbers");
  if (weights.size() != inst.subspaces.size())
    invalid(field("weights"), "expected one weight per subspace (" + std::to_string(inst.subspaces.size()) + ")");
  for (std::size_t k = 0; k < weights.size(); ++k) {
    const std::string wf = field("weights") + "[" + std::to_string(k) + "]";
    const double x = read_real(weights[k], wf);
    if (!(x > 0.0)) invalid(wf, "weights must be positive");
    inst.weights.push_back(x);
  }

  if (doc.contains("options")) inst.options = read_options(doc["options"]);
  return inst;
}

Json parse_json(std::string_view text) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    if (const auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  }
}

Json number_array(std::span<const double> values) {
  Json a = Json::array();
  for (double x : values) a.push_back(x);
  return a;
}

void dump_number(const Json& v, std::string& out) {
  if (v.is_number_float()) {
    const double x = v.get<double>();
    if (!std::isfinite(x)) {
      out += "null";
      return;
    }
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    out += buf;
  } else {
    out += v.dump();
  }
}

bool is_scalar(const Json& v) { return !v.is_array() && !v.is_object(); }

void dump(const Json& v, std::size_t indent, std::string& out) {
  const std::string pad(indent, ' ');
  const std::string inner(indent + 2, ' ');
  if (v.is_number()) {
    dump_number(v, out);
  } else if (v.is_array()) {
    if (v.empty()) {
      out += "[]";
    } else if (std::all_of(v.begin(), v.end(), is_scalar)) {
      out += '[';
      for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ", ";
        dump(v[i], indent, out);
      }
      out += ']';
    } else {
      out += "[\n";
      for (std::size_t i = 0; i < v.size(); ++i) {
        out += inner;
        dump(v[i], indent + 2, out);
        out += i + 1 < v.size() ? ",\n" : "\n";
      }
      out += pad + ']';
    }
  } else if (v.is_object()) {
    if (v.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    std::size_t i = 0;
    for (const auto& [key, value] : v.items()) {
      out += inner + Json(key).dump() + ": ";
      dump(value, indent + 2, out);
      out += ++i < v.size() ? ",\n" : "\n";
    }
    out += pad + '}';
  } else {
    out += v.dump();
  }
}

}  // namespace

ProblemInstance parse_instance_text(std::string_view text) {
  return read_instance(parse_json(text), "");
}

ProblemInstance parse_instance(const std::filesystem::path& path) {
  return parse_instance_text(read_text_file(path));
}

std::vector<ProblemInstance> parse_instances_text(std::string_view text) {
  const Json doc = parse_json(text);
  std::vector<ProblemInstance> out;
  if (doc.is_array()) {
    if (doc.empty()) invalid("instances", "expected at least one instance");
    for (std::size_t k = 0; k < doc.size(); ++k) out.push_back(read_instance(doc[k], "[" + std::to_string(k) + "]"));
  } else {
    out.push_back(read_instance(doc, ""));
  }
  return out;
}

std::vector<ProblemInstance> parse_instances(const std::filesystem::path& path) {
  return parse_instances_text(read_text_file(path));
}

Json instance_to_json(const ProblemInstance& instance) {
  Json doc;
  doc["dimension"] = instance.dimension;
  Json gram = Json::array();
  for (std::size_t i = 0; i < instance.gram.dim(); ++i) gram.push_back(number_array(instance.gram.matrix().row(i)));
  doc["gram"] = std::move(gram);
  Json subspaces = Json::array();
  for (const auto& columns : instance.subspaces) {
    Json basis = Json::array();
    for (const Vector& c : columns) basis.push_back(number_array(c));
    subspaces.push_back(Json{{"basis", std::move(basis)}});
  }
  doc["subspaces"] = std::move(subspaces);
  doc["weights"] = number_array(instance.weights);
  doc["options"] = Json{{"epsilonThreshold", instance.options.epsilon_threshold},
                        {"clusterTol", instance.options.cluster_tol},
                        {"frameTol", instance.options.frame_tol},
                        {"sweepEpsilons", number_array(instance.options.sweep_epsilons)}};
  return doc;
}

std::string serialize_instance(const ProblemInstance& instance) {
  return canonical_dump(instance_to_json(instance));
}

std::string canonical_dump(const Json& value) {
  std::string out;
  dump(value, 0, out);
  out += '\n';
  return out;
}

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorKind::Validation, "SHA-256 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

std::string instance_digest(std::span<const ProblemInstance> instances) {
  std::string text;
  for (const ProblemInstance& inst : instances) text += serialize_instance(inst);
  return "sha256:" + sha256_hex(text);
}

std::vector<double> parse_csv_doubles(std::string_view text, std::string_view field) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = std::min(text.find(',', start), text.size());
    std::string token(text.substr(start, comma - start));
    token.erase(0, token.find_first_not_of(" \t"));
    token.erase(token.find_last_not_of(" \t") + 1);
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(token, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (token.empty() || used != token.size() || !std::isfinite(x))
      throw Error(ErrorKind::Validation, std::string(field) + ": cannot parse '" + token + "' as a number");
    out.push_back(x);
    start = comma + 1;
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Validation, "cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error(ErrorKind::Validation, "failed writing " + path.string());
}

}  // namespace kfr
