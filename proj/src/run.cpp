#include "pslab/run.hpp"

#include "pslab/asymptotics.hpp"
#include "pslab/cocycle.hpp"
#include "pslab/flags.hpp"
#include "pslab/hilbert.hpp"
#include "pslab/parallel.hpp"
#include "pslab/patterson.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

namespace pslab {

namespace fs = std::filesystem;
using nlohmann::json;

std::string formatReal(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string quoteField(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

// RFC-4180 writer (CRLF line ends).
class CsvFile {
 public:
  CsvFile(const fs::path& path, const std::vector<std::string>& header) : out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::InvalidArgument, "cannot write " + path.string());
    write(header);
  }
  void write(const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out_ << ',';
      out_ << quoteField(fields[i]);
    }
    out_ << "\r\n";
  }

 private:
  std::ofstream out_;
};

std::string cell(double v) { return formatReal(v); }
std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

std::vector<std::string> indexed(const std::string& prefix, int n) {
  std::vector<std::string> out;
  for (int i = 1; i <= n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

// Serialized as the first max(theta) frame columns, row-major.
std::vector<std::string> frameHeader(int d, int columns) {
  std::vector<std::string> out;
  for (int r = 1; r <= d; ++r) {
    for (int c = 1; c <= columns; ++c) out.push_back("f" + std::to_string(r) + "_" + std::to_string(c));
  }
  return out;
}

void appendFrame(std::vector<std::string>& row, const Flag& f) {
  const int columns = f.theta().maxIndex();
  for (int r = 0; r < f.dim(); ++r) {
    for (int c = 0; c < columns; ++c) row.push_back(cell(f.frame()(r, c)));
  }
}

void appendVector(std::vector<std::string>& row, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) row.push_back(cell(v(i)));
}

json estimateJson(const ExponentEstimate& e) {
  return {{"deltaHat", e.deltaHat}, {"method", e.method},     {"rMin", e.rMin},
          {"rMax", e.rMax},         {"certifiedRMax", e.certifiedRMax}, {"residual", e.residual},
          {"sampleCount", e.sampleCount}};
}

ExponentOptions exponentOptions(const Params& params) {
  ExponentOptions o;
  o.dropLow = params.real("dropLow", o.dropLow, 0.0, 0.9);
  o.dropHigh = params.real("dropHigh", o.dropHigh, 0.0, 0.9);
  if (o.dropLow + o.dropHigh >= 1.0) throw ConfigError("params.dropHigh", "dropLow + dropHigh must be below 1");
  o.gridPoints = params.integer("gridPoints", o.gridPoints, 10, 100000);
  return o;
}

struct Context {
  const RunConfig& config;
  const GroupPresentation& p;
  const ThetaSet theta;
  const Functional phi;
  const Params params;
  const fs::path dir;
  const int workers;
  json results = json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> files;

  fs::path file(const std::string& name) {
    files.push_back(name);
    return dir / name;
  }
  int d() const { return p.dimension(); }
};

void addBallWarnings(Context& ctx, const WordBall& ball) {
  for (const auto& w : ball.warnings()) ctx.warnings.push_back(w);
}

std::vector<Word> randomWords(const GroupPresentation& p, std::size_t count, int maxLength, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> lengthDist(1, maxLength);
  std::uniform_int_distribution<int> letterDist(0, p.letterCount() - 1);
  std::vector<Word> out;
  for (std::size_t i = 0; i < count; ++i) {
    const int length = lengthDist(rng);
    Word w;
    while (static_cast<int>(w.size()) < length) {
      const Letter l = letterDist(rng);
      if (!w.empty() && l == inverseLetter(w.back())) continue;
      w.push_back(l);
    }
    out.push_back(w);
  }
  return out;
}

void runKappa(Context& ctx) {
  std::vector<Word> words;
  if (ctx.params.has("words")) {
    const json& list = ctx.params.raw("words");
    if (!list.is_array()) throw ConfigError("params.words", "expected an array of words");
    for (std::size_t i = 0; i < list.size(); ++i) {
      words.push_back(parseWord(list[i], ctx.p, "params.words[" + std::to_string(i) + "]"));
    }
  }
  const int count = ctx.params.integer("randomWords", 0, 0, 10'000'000);
  const int maxLength = ctx.params.integer("maxLength", 12, 1, 1000);
  for (auto& w : randomWords(ctx.p, static_cast<std::size_t>(count), maxLength, ctx.config.seed)) {
    words.push_back(std::move(w));
  }
  if (words.empty()) {
    for (int g = 0; g < ctx.p.rank(); ++g) words.push_back({2 * g});
  }
  const int d = ctx.d();
  std::vector<std::string> header{"index", "word"};
  for (const auto& h : indexed("kappa_", d)) header.push_back(h);
  for (const auto& h : indexed("nu_", d)) header.push_back(h);
  header.push_back("phi_kappa");
  header.push_back("phi_nu");
  std::vector<std::vector<std::string>> rows(words.size());
  parallelFor(words.size(), ctx.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const ElementStack s = ctx.p.evaluate(words[i]);
      std::vector<std::string> row{cell(i), ctx.p.wordString(words[i])};
      const WeylVector k = s.kappa(), n = jordanOfWord(ctx.p, words[i]);
      appendVector(row, k.entries());
      appendVector(row, n.entries());
      row.push_back(cell(evalFunctional(ctx.phi, projectTheta(k, ctx.theta))));
      row.push_back(cell(evalFunctional(ctx.phi, projectTheta(n, ctx.theta))));
      rows[i] = std::move(row);
    }
  });
  CsvFile csv(ctx.file("kappa.csv"), header);
  for (const auto& row : rows) csv.write(row);
  ctx.results["count"] = words.size();
}

void runOrbit(Context& ctx) {
  const int n = ctx.params.integer("n", 6, 0, 64);
  BallOptions options;
  options.workers = ctx.workers;
  const WordBall ball = wordBall(ctx.p, n, options);
  addBallWarnings(ctx, ball);
  const int d = ctx.d();
  std::vector<std::string> header{"index", "length", "word"};
  for (const auto& h : indexed("kappa_", d)) header.push_back(h);
  header.push_back("phi");
  CsvFile csv(ctx.file("orbit.csv"), header);
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const WeylVector k = ball.kappa(i);
    std::vector<std::string> row{cell(i), cell(ball.length(i)), ctx.p.wordString(ball.word(i))};
    appendVector(row, k.entries());
    row.push_back(cell(evalFunctional(ctx.phi, projectTheta(k, ctx.theta))));
    csv.write(row);
  }
  ctx.results["size"] = ball.size();
  ctx.results["merged"] = ball.mergedCount();
}

void runLimitSet(Context& ctx) {
  const int n = ctx.params.integer("n", 6, 1, 64);
  const double gap = ctx.params.real("gapTolerance", kDefaultGapTolerance, 0.0, 1.0);
  const LimitSetSample sample = sampleLimitSet(ctx.p, ctx.theta, n, ctx.workers, gap);
  std::vector<std::string> header{"index", "word"};
  for (const auto& h : frameHeader(ctx.d(), ctx.theta.maxIndex())) header.push_back(h);
  CsvFile csv(ctx.file("limit_set.csv"), header);
  for (std::size_t i = 0; i < sample.points.size(); ++i) {
    std::vector<std::string> row{cell(i), ctx.p.wordString(sample.points[i].word)};
    appendFrame(row, sample.points[i].flag);
    csv.write(row);
  }
  ctx.results["samples"] = sample.points.size();
  ctx.results["skipped"] = sample.skipped;
  if (sample.skipped > 0) {
    ctx.warnings.push_back(std::to_string(sample.skipped) + " sphere elements failed the gap test");
  }
}

void negativePhiWarning(Context& ctx, const OrbitValues& orbit) {
  std::size_t negative = 0;
  const std::size_t begin = orbit.ball->sphereBegin(orbit.radius), end = orbit.ball->sphereEnd(orbit.radius);
  for (std::size_t i = begin; i < end; ++i) negative += orbit.phi[i] < 0.0 ? 1 : 0;
  if (negative > 0) {
    ctx.warnings.push_back("phi is negative on " + std::to_string(negative) + " of " + std::to_string(end - begin) +
                           " outer-sphere elements");
  }
}

void runCriticalExponent(Context& ctx) {
  const int nMax = ctx.params.integer("nMax", 10, 4, 10'000'000);
  const std::string method = ctx.params.text("method", "regression", {"regression", "series-transition", "both"});
  const ExponentOptions options = exponentOptions(ctx.params);
  const OrbitValues orbit = orbitValues(ctx.p, ctx.phi, ctx.theta, nMax, ctx.workers);
  addBallWarnings(ctx, *orbit.ball);
  negativePhiWarning(ctx, orbit);
  ctx.results["ballSize"] = orbit.ball->size();
  if (method != "series-transition") {
    const ExponentEstimate e = criticalExponent(orbit, options);
    ctx.results["regression"] = estimateJson(e);
    ctx.results["deltaHat"] = e.deltaHat;
    CsvFile csv(ctx.file("exponent.csv"), {"R", "logN"});
    for (const auto& [r, logN] : e.table) csv.write({cell(r), cell(logN)});
  }
  if (method != "regression") {
    const ExponentEstimate e = seriesTransitionExponent(orbit);
    ctx.results["seriesTransition"] = estimateJson(e);
    if (method == "series-transition") ctx.results["deltaHat"] = e.deltaHat;
  }
}

void runPsMeasure(Context& ctx) {
  const int n = ctx.params.integer("n", 8, 1, 64);
  const int exponentN = ctx.params.integer("exponentNMax", std::max(n, 8), 4, 64);
  const double deltaHat = criticalExponent(ctx.p, ctx.phi, ctx.theta, exponentN, ctx.workers).deltaHat;
  const double margin = ctx.params.real("sMargin", 0.05, 0.0, 10.0);
  const double s = ctx.params.real("s", deltaHat * (1.0 + margin), 0.0, 1e6);
  const AtomicMeasure mu = pattersonMeasure(ctx.p, ctx.phi, ctx.theta, s, n, deltaHat, 0.01, ctx.workers);
  std::vector<std::string> header{"index", "word", "length", "phi", "weight"};
  for (const auto& h : frameHeader(ctx.d(), ctx.theta.maxIndex())) header.push_back(h);
  CsvFile csv(ctx.file("atoms.csv"), header);
  for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
    const Atom& a = mu.atoms[i];
    std::vector<std::string> row{cell(i), ctx.p.wordString(a.word), cell(static_cast<int>(a.word.size())),
                                 cell(a.phi), cell(a.weight)};
    appendFrame(row, a.flag);
    csv.write(row);
  }
  ctx.results["deltaHat"] = deltaHat;
  ctx.results["s"] = s;
  ctx.results["atoms"] = mu.atoms.size();
  ctx.results["excludedCount"] = mu.excludedCount;
  ctx.results["excludedMass"] = mu.excludedMass;
  ctx.results["massUpToHalfRadius"] = massUpToLength(mu, n / 2);
  if (mu.excludedCount > 0) {
    ctx.warnings.push_back(std::to_string(mu.excludedCount) + " elements excluded by the gap test");
  }
}

void runQuasiInvariance(Context& ctx) {
  const int n = ctx.params.integer("n", 6, 1, 64);
  const Word alpha = ctx.params.has("alpha") ? parseWord(ctx.params.raw("alpha"), ctx.p, "params.alpha") : Word{0};
  const auto stats = quasiInvarianceResidual(ctx.p, ctx.phi, ctx.theta, alpha, n, ctx.workers);
  CsvFile csv(ctx.file("quasi_invariance.csv"), {"sphere", "count", "min", "median", "max"});
  for (const auto& s : stats) csv.write({cell(s.sphere), cell(s.count), cell(s.min), cell(s.median), cell(s.max)});
  ctx.results["alpha"] = ctx.p.wordString(alpha);
  ctx.results["spheres"] = stats.size();
}

void runShadowCheck(Context& ctx) {
  ShadowOptions o;
  const Params& q = ctx.params;
  o.exponentRadius = q.integer("exponentRadius", o.exponentRadius, 4, 64);
  o.measureRadius = q.integer("measureRadius", o.measureRadius, 1, 64);
  o.sEpsilon = q.real("sEpsilon", o.sEpsilon, 1e-6, 10.0);
  o.sphereMin = q.integer("sphereMin", o.sphereMin, 1, 64);
  o.sphereMax = q.integer("sphereMax", o.sphereMax, o.sphereMin, 64);
  o.rFactor = q.real("rFactor", o.rFactor, 1e-6, 100.0);
  o.r0Grid = q.reals("r0Grid", o.r0Grid);
  for (double r : o.r0Grid) {
    if (!(r > 0.0)) throw ConfigError("params.r0Grid", "radii must be positive");
  }
  o.epsilonTarget = q.real("epsilonTarget", o.epsilonTarget, 1e-9, 1.0);
  o.epsilonRadius = q.integer("epsilonRadius", o.epsilonRadius, 0, 64);
  o.atomMinLength = q.integer("atomMinLength", o.atomMinLength, 0, 64);
  if (o.atomMinLength > o.measureRadius || (o.atomMinLength == 0 && o.sphereMax + 1 > o.measureRadius)) {
    throw ConfigError("params.measureRadius", "must exceed the largest sphere so that atoms remain");
  }
  o.workers = ctx.workers;
  const ShadowReport r = shadowMeasureCheck(ctx.p, o);
  {
    CsvFile csv(ctx.file("shadow_spheres.csv"), {"sphere", "count", "minRatio", "maxRatio", "spread"});
    for (const auto& s : r.spheres) {
      csv.write({cell(s.sphere), cell(s.count), cell(s.minRatio), cell(s.maxRatio), cell(s.spread)});
    }
  }
  {
    CsvFile csv(ctx.file("shadow_epsilon.csv"), {"R", "epsilon"});
    for (const auto& [radius, eps] : r.epsilonByR) csv.write({cell(radius), cell(eps)});
  }
  ctx.results = {{"deltaHat", r.deltaHat}, {"s", r.s},           {"r0", r.r0},
                 {"epsilon0", r.epsilon0}, {"r", r.r},           {"bound", r.bound},
                 {"overallSpread", r.overallSpread},             {"monotoneGrowth", r.monotoneGrowth},
                 {"spreadWithinBound", r.overallSpread <= r.bound}};
  for (const auto& w : r.warnings) ctx.warnings.push_back(w);
}

void runConicality(Context& ctx) {
  if (ctx.d() != 2) throw Error(ErrorCode::UnsupportedFamily, "conicality is computed for SL(2,R) presentations");
  const int n = ctx.params.integer("n", 8, 1, 64);
  const double r = ctx.params.real("r", 1.0, 1e-9, 100.0);
  Vector z(2);
  if (ctx.params.has("angle")) {
    const double angle = ctx.params.real("angle", 0.0, -10.0, 10.0);
    z << std::cos(angle), std::sin(angle);
    ctx.results["angle"] = angle;
  } else {
    const Word w = ctx.params.has("fixedPointOf") ? parseWord(ctx.params.raw("fixedPointOf"), ctx.p, "params.fixedPointOf")
                                                   : Word{0};
    z = kleinFixedPoint(ctx.p.evaluate(w).matrix());
    ctx.results["fixedPointOf"] = ctx.p.wordString(w);
  }
  const auto counts = conicalityScore(ctx.p, z, r, n, ctx.workers);
  CsvFile csv(ctx.file("conicality.csv"), {"sphere", "count"});
  for (std::size_t m = 0; m < counts.size(); ++m) csv.write({cell(m), cell(counts[m])});
  ctx.results["boundaryPoint"] = {z(0), z(1)};
}

void runCountGeodesics(Context& ctx) {
  const int wordLengthMax = ctx.params.integer("wordLengthMax", 10, 1, 24);
  const double tMax = ctx.params.real("tMax", 30.0, 1e-9, 1e6);
  const int rowCount = ctx.params.integer("rows", 60, 1, 100000);
  const bool primitiveOnly = ctx.params.boolean("primitiveOnly", true);
  const int exponentN = ctx.params.integer("exponentNMax", 12, 4, 64);
  const double deltaHat = criticalExponent(ctx.p, ctx.phi, ctx.theta, exponentN, ctx.workers).deltaHat;
  const CountTable table = countClosedGeodesics(ctx.p, ctx.phi, ctx.theta, tMax, rowCount, wordLengthMax,
                                                primitiveOnly, deltaHat, ctx.workers);
  const std::vector<std::string> columns{"T",     "count",           "unorientedCount", "prediction",
                                         "ratio", "logCountOverT",   "certified"};
  {
    CsvFile csv(ctx.file("count.csv"), columns);
    for (const auto& r : table.rows) {
      csv.write({cell(r.T), cell(r.count), cell(r.unorientedCount), cell(r.prediction), cell(r.ratio),
                 cell(r.logCountOverT), cell(r.certified)});
    }
  }
  json meta = {{"schemaVersion", kSchemaVersion}, {"columns", columns},
               {"deltaHat", deltaHat},            {"perLetterGrowth", table.perLetterGrowth},
               {"certifiedCutoff", table.certifiedCutoff},
               {"wordLengthMax", wordLengthMax},  {"primitiveOnly", primitiveOnly},
               {"classCount", table.classCount},  {"nonPositiveCount", table.nonPositiveCount},
               {"orientation", "gamma and its inverse counted separately; unorientedCount = count / 2"}};
  {
    std::ofstream out(ctx.file("count.meta.json"), std::ios::binary);
    out << meta.dump(2) << "\n";
  }
  ctx.results = meta;
  ctx.results.erase("columns");
  ctx.results.erase("schemaVersion");
  if (const CountRow* last = table.lastCertified()) {
    ctx.results["lastCertifiedT"] = last->T;
    ctx.results["lastCertifiedCount"] = last->count;
    ctx.results["logCountOverT"] = last->logCountOverT;
    ctx.results["logSlopeGap"] = std::abs(last->logCountOverT - deltaHat);
  }
  std::size_t truncated = 0;
  for (const auto& r : table.rows) truncated += r.certified ? 0 : 1;
  if (truncated > 0) ctx.warnings.push_back(std::to_string(truncated) + " rows beyond the certified cutoff (truncated)");
  if (table.nuCollisions > 0) {
    ctx.warnings.push_back(std::to_string(table.nuCollisions) + " nu-collisions between class representatives");
  }
}

void writeBoxTable(Context& ctx, const BoxDimension& box) {
  CsvFile csv(ctx.file("box_dim.csv"), {"scale", "count", "used"});
  for (std::size_t i = 0; i < box.scales.size(); ++i) {
    csv.write({cell(box.scales[i].first), cell(box.scales[i].second), cell(i >= box.fitBegin && i < box.fitEnd)});
  }
  ctx.results["dimension"] = box.dimension;
  ctx.results["residual"] = box.residual;
  ctx.results["pointCount"] = box.pointCount;
  ctx.results["saturatedScales"] = box.saturated;
}

void runBoxDim(Context& ctx) {
  const std::string source = ctx.params.text("source", "limit-set", {"limit-set", "cantor", "circle"});
  const std::vector<double> scales = ctx.params.reals("scales", {});
  ctx.results["source"] = source;
  if (source == "cantor") {
    const int depth = ctx.params.integer("depth", 12, 1, 20);
    writeBoxTable(ctx, boxCountingDimension(PointSet::euclidean(cantorSample(depth)), scales, ctx.workers));
    return;
  }
  if (source == "circle") {
    const int count = ctx.params.integer("points", 10000, 3, 10'000'000);
    std::vector<Vector> points;
    for (int i = 0; i < count; ++i) {
      Vector v(2);
      const double t = 2.0 * std::numbers::pi * i / count;
      v << std::cos(t), std::sin(t);
      points.push_back(v);
    }
    writeBoxTable(ctx, boxCountingDimension(PointSet::euclidean(points), scales, ctx.workers));
    return;
  }
  const int n = ctx.params.integer("n", 8, 1, 64);
  if (ctx.params.boolean("compareExponent", false)) {
    const DimensionReport r = hausdorffVsExponentExperiment(ctx.p, n, ctx.workers);
    writeBoxTable(ctx, r.box);
    ctx.results["exponent"] = estimateJson(r.exponent);
    ctx.results["deltaHat"] = r.exponent.deltaHat;
    ctx.results["difference"] = r.difference;
    ctx.results["samples"] = r.samples;
    ctx.results["skipped"] = r.skipped;
    return;
  }
  const std::string metric = ctx.params.text("metric", "chordal", {"chordal", "flag"});
  const LimitSetSample sample = sampleLimitSet(ctx.p, ctx.theta, n, ctx.workers);
  ctx.results["samples"] = sample.points.size();
  ctx.results["skipped"] = sample.skipped;
  if (metric == "flag") {
    std::vector<Flag> flags;
    for (const auto& s : sample.points) flags.push_back(s.flag);
    writeBoxTable(ctx, boxCountingDimension(PointSet::flags(std::move(flags)), scales, ctx.workers));
  } else {
    std::vector<Vector> lines;
    for (const auto& s : sample.points) lines.push_back(s.flag.frame().col(0));
    writeBoxTable(ctx, boxCountingDimension(PointSet::projective(lines), scales, ctx.workers));
  }
}

void runEntropyDrop(Context& ctx) {
  std::vector<Word> words;
  if (ctx.params.has("subgroup")) {
    const json& list = ctx.params.raw("subgroup");
    if (!list.is_array() || list.empty()) throw ConfigError("params.subgroup", "expected a non-empty array of words");
    for (std::size_t i = 0; i < list.size(); ++i) {
      words.push_back(parseWord(list[i], ctx.p, "params.subgroup[" + std::to_string(i) + "]"));
    }
  } else {
    words.push_back({0});
  }
  EntropyDropOptions o;
  o.nMax = ctx.params.integer("nMax", o.nMax, 4, 10'000'000);
  o.subgroupNMax = ctx.params.integer("subgroupNMax", 0, 0, 10'000'000);
  if (o.subgroupNMax != 0 && o.subgroupNMax < 4) throw ConfigError("params.subgroupNMax", "must be 0 or at least 4");
  o.limitSetRadius = ctx.params.integer("limitSetRadius", o.limitSetRadius, 1, 64);
  o.workers = ctx.workers;
  o.exponent = exponentOptions(ctx.params);
  const EntropyDropReport r = entropyDropExperiment(ctx.p, words, ctx.phi, ctx.theta, o);
  CsvFile csv(ctx.file("entropy_drop.csv"),
              {"role", "deltaHat", "rMin", "rMax", "certifiedRMax", "residual", "sampleCount", "limitSamples"});
  csv.write({"group", cell(r.group.deltaHat), cell(r.group.rMin), cell(r.group.rMax), cell(r.group.certifiedRMax),
             cell(r.group.residual), cell(r.group.sampleCount), cell(r.groupSamples)});
  csv.write({"subgroup", cell(r.subgroup.deltaHat), cell(r.subgroup.rMin), cell(r.subgroup.rMax),
             cell(r.subgroup.certifiedRMax), cell(r.subgroup.residual), cell(r.subgroup.sampleCount),
             cell(r.subgroupSamples)});
  json generators = json::array();
  for (const auto& w : words) generators.push_back(ctx.p.wordString(w));
  ctx.results = {{"subgroup", generators},
                 {"group", estimateJson(r.group)},
                 {"subgroupEstimate", estimateJson(r.subgroup)},
                 {"gap", r.gap},
                 {"separation", r.separation}};
}

void runConcavity(Context& ctx) {
  const int d = ctx.d();
  FunctionalSpec spec1, spec2;
  spec1.alpha[1] = 1.0;
  spec2.alpha[d - 1] = 1.0;
  if (ctx.params.has("phi1")) spec1 = parseFunctional(ctx.params.raw("phi1"), "params.phi1", d);
  if (ctx.params.has("phi2")) spec2 = parseFunctional(ctx.params.raw("phi2"), "params.phi2", d);
  const Functional phi1 = spec1.build(d), phi2 = spec2.build(d);
  if (!phi1.supportedIn(ctx.theta)) throw ConfigError("params.phi1", "support is not contained in theta");
  if (!phi2.supportedIn(ctx.theta)) throw ConfigError("params.phi2", "support is not contained in theta");
  const std::vector<double> lambdas =
      ctx.params.reals("lambdas", {0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9});
  for (double l : lambdas) {
    if (l < 0.0 || l > 1.0) throw ConfigError("params.lambdas", "values must lie in [0, 1]");
  }
  const int nMax = ctx.params.integer("nMax", 8, 4, 64);
  const double slack = ctx.params.real("predictionSlack", 0.05, 0.0, 10.0);
  const ConcavityReport r = concavityExperiment(ctx.p, phi1, phi2, ctx.theta, lambdas, nMax, ctx.workers, slack);
  CsvFile csv(ctx.file("concavity.csv"), {"lambda", "deltaHat", "residual", "withinPrediction"});
  double worst = 0.0;
  bool all = true;
  for (const auto& row : r.rows) {
    csv.write({cell(row.lambda), cell(row.deltaHat), cell(row.residual), cell(row.withinPrediction)});
    worst = std::max(worst, row.deltaHat);
    all = all && row.withinPrediction;
  }
  ctx.results = {{"delta1", r.delta1}, {"delta2", r.delta2}, {"maxNormalized", worst}, {"allWithin", all},
                 {"phi1", functionalToJson(spec1)}, {"phi2", functionalToJson(spec2)}};
}

void runLimitCone(Context& ctx) {
  const int n = ctx.params.integer("n", 6, 1, 64);
  const auto sample = limitConeSample(ctx.p, ctx.theta, n, ctx.workers);
  const int d = ctx.d();
  std::vector<std::string> header{"index"};
  for (const auto& h : indexed("v_", d)) header.push_back(h);
  CsvFile csv(ctx.file("limit_cone.csv"), header);
  std::vector<Vector> sorted;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    std::vector<std::string> row{cell(i)};
    appendVector(row, sample[i].entries());
    csv.write(row);
    sorted.push_back(sample[i].entries());
  }
  std::sort(sorted.begin(), sorted.end(), [](const Vector& a, const Vector& b) {
    return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(), b.data() + b.size());
  });
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i == 0 || (sorted[i] - sorted[i - 1]).cwiseAbs().maxCoeff() > 1e-6) ++distinct;
  }
  ctx.results = {{"samples", sample.size()}, {"distinctDirections", distinct}};
}

}  // namespace

RunOutcome runConfig(const RunConfig& config, const std::string& outDir, int workers) {
  const auto start = std::chrono::steady_clock::now();
  const GroupPresentation p = buildPresentation(config);
  fs::create_directories(outDir);
  Context ctx{config,
              p,
              buildTheta(config),
              config.phi.build(config.dimension),
              Params(config.params, config.command),
              fs::path(outDir),
              resolveWorkers(workers),
              json::object(),
              {},
              {}};

  const std::string& c = config.command;
  if (c == "kappa") runKappa(ctx);
  else if (c == "orbit") runOrbit(ctx);
  else if (c == "limit-set") runLimitSet(ctx);
  else if (c == "critical-exponent") runCriticalExponent(ctx);
  else if (c == "ps-measure") runPsMeasure(ctx);
  else if (c == "quasi-invariance") runQuasiInvariance(ctx);
  else if (c == "shadow-check") runShadowCheck(ctx);
  else if (c == "conicality") runConicality(ctx);
  else if (c == "count-geodesics") runCountGeodesics(ctx);
  else if (c == "box-dim") runBoxDim(ctx);
  else if (c == "entropy-drop") runEntropyDrop(ctx);
  else if (c == "concavity") runConcavity(ctx);
  else if (c == "limit-cone") runLimitCone(ctx);
  else throw ConfigError("command", "unknown command");

  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  RunOutcome out;
  out.files = ctx.files;
  out.files.push_back("manifest.json");
  out.manifest = {
      {"schemaVersion", kSchemaVersion},
      {"command", config.command},
      {"config", toJson(config)},
      {"results", ctx.results},
      {"warnings", ctx.warnings},
      {"outputs", out.files},
      {"versions",
       {{"pslab", kVersion},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                      std::to_string(EIGEN_MINOR_VERSION)},
        {"schema", kSchemaVersion}}},
      // Everything under runtime varies between runs and is excluded from
      // determinism comparisons.
      {"runtime", {{"wallSeconds", seconds}, {"workers", ctx.workers}}},
  };
  std::ofstream manifest(fs::path(outDir) / "manifest.json", std::ios::binary);
  manifest << out.manifest.dump(2) << "\n";
  return out;
}

json errorRecord(const std::exception& e) {
  json record = {{"message", e.what()}};
  if (const auto* err = dynamic_cast<const Error*>(&e)) {
    record["error"] = std::string(errorName(err->code()));
    if (const auto* cfg = dynamic_cast<const ConfigError*>(&e)) record["path"] = cfg->path();
  } else {
    record["error"] = "Internal";
  }
  return record;
}

int exitCodeFor(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return err->code() == ErrorCode::ConfigInvalid ? 2 : 3;
  return 1;
}

}  // namespace pslab
