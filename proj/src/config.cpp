#include "pslab/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <set>

namespace pslab {

using nlohmann::json;

namespace {

const std::vector<std::string> kTopLevel = {"schemaVersion", "command", "dimension", "generators", "labels",
                                            "assumeFree",    "representation", "theta", "phi", "params",
                                            "seed",          "workers", "output"};

[[noreturn]] void fail(const std::string& path, const std::string& message) { throw ConfigError(path, message); }

int requireInt(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

double requireNumber(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

Matrix parseMatrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) fail(path, "expected a non-empty array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const std::string rowPath = path + "[" + std::to_string(r) + "]";
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n) fail(rowPath, "matrix must be square");
    for (Eigen::Index c = 0; c < n; ++c) {
      m(r, c) = requireNumber(row[static_cast<std::size_t>(c)], rowPath + "[" + std::to_string(c) + "]");
    }
  }
  return m;
}

json matrixToJson(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

std::map<int, double> parseCoefficients(const json& j, const std::string& path, int d) {
  if (!j.is_object()) fail(path, "expected an object of index -> coefficient");
  std::map<int, double> out;
  for (const auto& [key, value] : j.items()) {
    int k = 0;
    try {
      std::size_t used = 0;
      k = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      fail(path + "." + key, "index must be an integer");
    }
    if (k < 1 || k > d - 1) fail(path + "." + key, "index must lie in 1.." + std::to_string(d - 1));
    out[k] = requireNumber(value, path + "." + key);
  }
  return out;
}

json coefficientsToJson(const std::map<int, double>& c) {
  json out = json::object();
  for (const auto& [k, v] : c) out[std::to_string(k)] = v;
  return out;
}

}  // namespace

Functional FunctionalSpec::build(int d) const {
  Functional out(d, omega);
  for (const auto& [k, c] : alpha) out = out + Functional::alpha(k, d) * c;
  return out;
}

bool RunConfig::operator==(const RunConfig& o) const {
  if (generators.size() != o.generators.size()) return false;
  for (std::size_t i = 0; i < generators.size(); ++i) {
    if (generators[i].rows() != o.generators[i].rows() || generators[i] != o.generators[i]) return false;
  }
  return schemaVersion == o.schemaVersion && command == o.command && dimension == o.dimension &&
         labels == o.labels && assumeFree == o.assumeFree && representation == o.representation &&
         theta == o.theta && phi == o.phi && params == o.params && seed == o.seed && workers == o.workers &&
         output == o.output;
}

const std::vector<std::string>& knownCommands() {
  static const std::vector<std::string> commands = {
      "kappa",           "orbit",        "limit-set",       "critical-exponent", "ps-measure",
      "quasi-invariance", "shadow-check", "conicality",      "count-geodesics",   "box-dim",
      "entropy-drop",    "concavity",    "limit-cone"};
  return commands;
}

const std::vector<std::string>& allowedParams(const std::string& command) {
  static const std::map<std::string, std::vector<std::string>> table = {
      {"kappa", {"words", "randomWords", "maxLength"}},
      {"orbit", {"n"}},
      {"limit-set", {"n", "gapTolerance"}},
      {"critical-exponent", {"nMax", "method", "dropLow", "dropHigh", "gridPoints"}},
      {"ps-measure", {"n", "exponentNMax", "sMargin", "s"}},
      {"quasi-invariance", {"n", "alpha"}},
      {"shadow-check",
       {"exponentRadius", "measureRadius", "sEpsilon", "sphereMin", "sphereMax", "rFactor", "r0Grid",
        "epsilonTarget", "epsilonRadius", "atomMinLength"}},
      {"conicality", {"n", "r", "fixedPointOf", "angle"}},
      {"count-geodesics", {"wordLengthMax", "tMax", "rows", "primitiveOnly", "exponentNMax"}},
      {"box-dim", {"source", "n", "depth", "points", "metric", "scales", "compareExponent"}},
      {"entropy-drop",
       {"subgroup", "nMax", "subgroupNMax", "limitSetRadius", "dropLow", "dropHigh", "gridPoints"}},
      {"concavity", {"phi1", "phi2", "lambdas", "nMax", "predictionSlack"}},
      {"limit-cone", {"n"}},
  };
  static const std::vector<std::string> none;
  const auto it = table.find(command);
  return it == table.end() ? none : it->second;
}

FunctionalSpec parseFunctional(const json& j, const std::string& path, int d) {
  if (!j.is_object()) fail(path, "expected {\"omega\": {...}} and/or {\"alpha\": {...}}");
  FunctionalSpec out;
  for (const auto& [key, value] : j.items()) {
    if (key == "omega") {
      out.omega = parseCoefficients(value, path + ".omega", d);
    } else if (key == "alpha") {
      out.alpha = parseCoefficients(value, path + ".alpha", d);
    } else {
      fail(path + "." + key, "unknown key");
    }
  }
  if (out.omega.empty() && out.alpha.empty()) fail(path, "functional has no coefficients");
  return out;
}

json functionalToJson(const FunctionalSpec& f) {
  json out = json::object();
  if (!f.omega.empty()) out["omega"] = coefficientsToJson(f.omega);
  if (!f.alpha.empty()) out["alpha"] = coefficientsToJson(f.alpha);
  return out;
}

RunConfig parseConfig(const json& j) {
  if (!j.is_object()) fail("$", "configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find(kTopLevel.begin(), kTopLevel.end(), key) == kTopLevel.end()) fail(key, "unknown field");
  }
  RunConfig c;
  if (!j.contains("schemaVersion")) fail("schemaVersion", "required");
  c.schemaVersion = requireInt(j["schemaVersion"], "schemaVersion");
  if (c.schemaVersion != kSchemaVersion) fail("schemaVersion", "unsupported version");

  if (!j.contains("command") || !j["command"].is_string()) fail("command", "required string");
  c.command = j["command"].get<std::string>();
  const auto& commands = knownCommands();
  if (std::find(commands.begin(), commands.end(), c.command) == commands.end()) fail("command", "unknown command");

  if (!j.contains("dimension")) fail("dimension", "required");
  c.dimension = requireInt(j["dimension"], "dimension");
  if (c.dimension < 2 || c.dimension > 12) fail("dimension", "must lie in 2..12");
  const int d = c.dimension;

  if (j.contains("representation")) {
    const json& r = j["representation"];
    if (!r.is_object()) fail("representation", "expected an object");
    for (const auto& [key, value] : r.items()) {
      if (key != "type" && key != "degree") fail("representation." + key, "unknown key");
    }
    if (!r.contains("type") || !r["type"].is_string()) fail("representation.type", "required string");
    c.representation.type = r["type"].get<std::string>();
    if (c.representation.type != "none" && c.representation.type != "symmetric" &&
        c.representation.type != "exterior") {
      fail("representation.type", "must be none, symmetric or exterior");
    }
    if (c.representation.type != "none") {
      if (!r.contains("degree")) fail("representation.degree", "required");
      c.representation.degree = requireInt(r["degree"], "representation.degree");
    }
  }

  if (!j.contains("generators") || !j["generators"].is_array() || j["generators"].empty()) {
    fail("generators", "required non-empty array of matrices");
  }
  for (std::size_t i = 0; i < j["generators"].size(); ++i) {
    const std::string path = "generators[" + std::to_string(i) + "]";
    Matrix m = parseMatrix(j["generators"][i], path);
    int expected = d;
    if (c.representation.type == "symmetric") {
      expected = 2;
      if (c.representation.degree != d) fail("representation.degree", "must equal the dimension");
    } else if (c.representation.type == "exterior") {
      const int k = c.representation.degree;
      expected = static_cast<int>(m.rows());
      if (k < 1 || k >= expected || static_cast<int>(binomial(expected, k)) != d) {
        fail("representation.degree", "exterior power dimension does not match");
      }
    }
    if (m.rows() != expected) fail(path, "expected a " + std::to_string(expected) + "x" + std::to_string(expected) + " matrix");
    try {
      normalizeUnimodular(m);
    } catch (const Error& e) {
      fail(path, e.what());
    }
    c.generators.push_back(std::move(m));
  }

  if (j.contains("labels")) {
    const json& l = j["labels"];
    if (!l.is_array() || l.size() != c.generators.size()) fail("labels", "one label per generator");
    std::set<std::string> seen;
    for (std::size_t i = 0; i < l.size(); ++i) {
      const std::string path = "labels[" + std::to_string(i) + "]";
      if (!l[i].is_string() || l[i].get<std::string>().empty()) fail(path, "expected a non-empty string");
      if (!seen.insert(l[i].get<std::string>()).second) fail(path, "duplicate label");
      c.labels.push_back(l[i].get<std::string>());
    }
  }
  if (j.contains("assumeFree")) {
    if (!j["assumeFree"].is_boolean()) fail("assumeFree", "expected a boolean");
    c.assumeFree = j["assumeFree"].get<bool>();
  }

  if (j.contains("theta")) {
    const json& t = j["theta"];
    if (!t.is_array()) fail("theta", "expected an array of indices");
    for (std::size_t i = 0; i < t.size(); ++i) c.theta.push_back(requireInt(t[i], "theta[" + std::to_string(i) + "]"));
  } else {
    for (int k = 1; k < d; ++k) c.theta.push_back(k);
  }
  try {
    ThetaSet(d, c.theta);
  } catch (const Error& e) {
    fail("theta", e.what());
  }

  if (j.contains("phi")) {
    c.phi = parseFunctional(j["phi"], "phi", d);
  } else {
    c.phi.alpha[1] = 1.0;
  }
  if (!c.phi.build(d).supportedIn(ThetaSet(d, c.theta))) fail("phi", "support is not contained in theta");

  if (j.contains("params")) {
    if (!j["params"].is_object()) fail("params", "expected an object");
    c.params = j["params"];
    const auto& allowed = allowedParams(c.command);
    for (const auto& [key, value] : c.params.items()) {
      if (key == "elementCap" || key == "dedupTolerance") continue;
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        fail("params." + key, "not a parameter of " + c.command);
      }
    }
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) fail("seed", "expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("workers")) {
    c.workers = requireInt(j["workers"], "workers");
    if (c.workers < 1) fail("workers", "must be at least 1");
  }
  if (j.contains("output")) {
    if (!j["output"].is_string() || j["output"].get<std::string>().empty()) fail("output", "expected a path");
    c.output = j["output"].get<std::string>();
  }
  return c;
}

RunConfig loadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("$", "cannot open " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail("$", std::string("malformed JSON: ") + e.what());
  }
  return parseConfig(j);
}

json toJson(const RunConfig& c) {
  json j;
  j["schemaVersion"] = c.schemaVersion;
  j["command"] = c.command;
  j["dimension"] = c.dimension;
  json gens = json::array();
  for (const auto& g : c.generators) gens.push_back(matrixToJson(g));
  j["generators"] = gens;
  if (!c.labels.empty()) j["labels"] = c.labels;
  j["assumeFree"] = c.assumeFree;
  if (c.representation.type != "none") {
    j["representation"] = {{"type", c.representation.type}, {"degree", c.representation.degree}};
  }
  j["theta"] = c.theta;
  j["phi"] = functionalToJson(c.phi);
  j["params"] = c.params;
  j["seed"] = c.seed;
  j["workers"] = c.workers;
  j["output"] = c.output;
  return j;
}

GroupPresentation buildPresentation(const RunConfig& c) {
  std::vector<Matrix> gens;
  for (const auto& g : c.generators) {
    if (c.representation.type == "symmetric") {
      gens.push_back(symmetricPowerRep(g, c.representation.degree));
    } else if (c.representation.type == "exterior") {
      gens.push_back(exteriorPowerRep(g, c.representation.degree));
    } else {
      gens.push_back(g);
    }
  }
  GroupPresentation p(gens, c.labels, c.assumeFree);
  const Params params(c.params, c.command);
  if (params.has("elementCap")) {
    p.setElementCap(static_cast<std::size_t>(params.integer("elementCap", 0, 1, 2'000'000'000)));
  }
  if (params.has("dedupTolerance")) p.setDedupTolerance(params.real("dedupTolerance", 1e-8, 1e-15, 1.0));
  return p;
}

ThetaSet buildTheta(const RunConfig& c) { return ThetaSet(c.dimension, c.theta); }

Word parseWord(const json& j, const GroupPresentation& p, const std::string& path) {
  Word w;
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    for (char ch : s) {
      const bool inverse = std::isupper(static_cast<unsigned char>(ch)) != 0;
      const std::string key(1, static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
      const auto& labels = p.labels();
      const auto it = std::find(labels.begin(), labels.end(), key);
      if (it == labels.end()) fail(path, std::string("unknown letter '") + ch + "'");
      w.push_back(2 * static_cast<int>(it - labels.begin()) + (inverse ? 1 : 0));
    }
  } else if (j.is_array()) {
    std::vector<int> signedWord;
    for (std::size_t i = 0; i < j.size(); ++i) {
      const int v = requireInt(j[i], path + "[" + std::to_string(i) + "]");
      if (v == 0 || std::abs(v) > p.rank()) fail(path + "[" + std::to_string(i) + "]", "generator index out of range");
      signedWord.push_back(v);
    }
    w = fromSigned(signedWord);
  } else {
    fail(path, "expected a word string or an array of signed generator indices");
  }
  return freelyReduce(w);
}

Params::Params(const json& j, std::string command) : j_(j), command_(std::move(command)) {}

int Params::integer(const std::string& key, int fallback, int lo, int hi) const {
  if (!j_.contains(key)) return fallback;
  const int v = requireInt(j_.at(key), path(key));
  if (v < lo || v > hi) fail(path(key), "must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  return v;
}

double Params::real(const std::string& key, double fallback, double lo, double hi) const {
  if (!j_.contains(key)) return fallback;
  const double v = requireNumber(j_.at(key), path(key));
  if (v < lo || v > hi) fail(path(key), "out of range");
  return v;
}

bool Params::boolean(const std::string& key, bool fallback) const {
  if (!j_.contains(key)) return fallback;
  if (!j_.at(key).is_boolean()) fail(path(key), "expected a boolean");
  return j_.at(key).get<bool>();
}

std::string Params::text(const std::string& key, const std::string& fallback,
                         const std::vector<std::string>& allowed) const {
  if (!j_.contains(key)) return fallback;
  if (!j_.at(key).is_string()) fail(path(key), "expected a string");
  const std::string v = j_.at(key).get<std::string>();
  if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
    fail(path(key), "unsupported value '" + v + "'");
  }
  return v;
}

std::vector<double> Params::reals(const std::string& key, const std::vector<double>& fallback) const {
  if (!j_.contains(key)) return fallback;
  const json& a = j_.at(key);
  if (!a.is_array() || a.empty()) fail(path(key), "expected a non-empty array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < a.size(); ++i) out.push_back(requireNumber(a[i], path(key) + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace pslab
