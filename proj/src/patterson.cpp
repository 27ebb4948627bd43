#include "pslab/patterson.hpp"

#include "pslab/cocycle.hpp"
#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>

namespace pslab {

namespace {

double phiOfEntries(const Functional& phi, const ThetaSet& theta, std::span<const double> entries) {
  const WeylVector k(Eigen::Map<const Vector>(entries.data(), static_cast<Eigen::Index>(entries.size())));
  return evalFunctional(phi, projectTheta(k, theta));
}

// Least-squares slope and RMS residual of y against x.
std::pair<double, double> fitLine(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxx > 0.0 ? sxy / sxx : 0.0;
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - slope * (x[i] - mx);
    ss += r * r;
  }
  return {slope, std::sqrt(ss / n)};
}

}  // namespace

double OrbitValues::certifiedRMax() const {
  if (!ball || radius < 1) return 0.0;
  double out = std::numeric_limits<double>::infinity();
  for (std::size_t i = ball->sphereBegin(radius); i < ball->sphereEnd(radius); ++i) out = std::min(out, phi[i]);
  return std::isfinite(out) ? out : 0.0;
}

OrbitValues orbitValues(std::shared_ptr<const WordBall> ball, const Functional& phi, const ThetaSet& theta) {
  OrbitValues out;
  out.radius = ball->radius();
  out.phi.resize(ball->size());
  for (std::size_t i = 0; i < ball->size(); ++i) out.phi[i] = phiOfEntries(phi, theta, ball->kappaEntries(i));
  out.ball = std::move(ball);
  return out;
}

OrbitValues orbitValues(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, int n,
                        int workers) {
  if (theta.dimension() != p.dimension() || phi.dimension() != p.dimension()) {
    throw Error(ErrorCode::ThetaMismatch, "dimension mismatch between presentation, theta and phi");
  }
  BallOptions options;
  options.workers = workers;
  return orbitValues(std::make_shared<const WordBall>(wordBall(p, n, options)), phi, theta);
}

PartialSum poincarePartialSum(const OrbitValues& orbit, double s, double negativeFraction) {
  if (s < 0.0) throw Error(ErrorCode::InvalidArgument, "s must be nonnegative");
  const WordBall& ball = *orbit.ball;
  const int n = orbit.radius;
  if (n >= 1) {
    std::size_t negative = 0, total = 0;
    for (std::size_t i = ball.sphereBegin(n); i < ball.sphereEnd(n); ++i) {
      ++total;
      if (orbit.phi[i] < -1e-12) ++negative;
    }
    if (total > 0 && static_cast<double>(negative) > negativeFraction * static_cast<double>(total)) {
      throw Error(ErrorCode::NegativePhiOnCone, std::to_string(negative) + " of " + std::to_string(total) +
                                                    " sampled cone directions have phi < 0");
    }
  }
  PartialSum out;
  for (int m = 0; m <= n; ++m) {
    double sum = 0.0;
    for (std::size_t i = ball.sphereBegin(m); i < ball.sphereEnd(m); ++i) sum += std::exp(-s * orbit.phi[i]);
    out.sphereSums.push_back(sum);
    out.value += sum;
  }
  std::vector<double> xs, ys;
  for (int m = std::max(1, (n + 1) / 2); m <= n; ++m) {
    const double v = out.sphereSums[static_cast<std::size_t>(m)];
    if (v > 0.0) {
      xs.push_back(m);
      ys.push_back(std::log(v));
    }
  }
  if (xs.size() >= 2) out.tailSlope = fitLine(xs, ys).first;
  return out;
}

PartialSum poincarePartialSum(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, double s,
                              int n, int workers, double negativeFraction) {
  return poincarePartialSum(orbitValues(p, phi, theta, n, workers), s, negativeFraction);
}

ExponentEstimate criticalExponent(const std::vector<double>& values, double certifiedRMax,
                                  const ExponentOptions& options) {
  const double rMax = options.rMaxOverride > 0.0 ? std::min(options.rMaxOverride, certifiedRMax) : certifiedRMax;
  const double lo = options.dropLow * rMax;
  const double hi = (1.0 - options.dropHigh) * rMax;
  if (!(rMax > 0.0) || !std::isfinite(rMax) || !(hi > lo) || options.gridPoints < 2) {
    throw Error(ErrorCode::WindowEmpty, "certified window [" + std::to_string(lo) + ", " + std::to_string(hi) +
                                            "] is degenerate");
  }
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  ExponentEstimate out;
  out.method = "sphere-regression";
  out.certifiedRMax = certifiedRMax;
  out.rMin = lo;
  out.rMax = hi;
  std::vector<double> xs, ys;
  for (int i = 0; i < options.gridPoints; ++i) {
    const double r = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(options.gridPoints - 1);
    const auto count = static_cast<double>(std::upper_bound(sorted.begin(), sorted.end(), r) - sorted.begin());
    if (count <= 0.0) continue;
    xs.push_back(r);
    ys.push_back(std::log(count));
    out.table.emplace_back(r, std::log(count));
  }
  if (xs.size() < 2) throw Error(ErrorCode::WindowEmpty, "no orbit points inside the window");
  const auto [slope, residual] = fitLine(xs, ys);
  out.deltaHat = std::max(0.0, slope);
  out.residual = residual;
  out.sampleCount = static_cast<std::size_t>(std::upper_bound(sorted.begin(), sorted.end(), hi) - sorted.begin());
  return out;
}

ExponentEstimate criticalExponent(const OrbitValues& orbit, const ExponentOptions& options) {
  return criticalExponent(orbit.phi, orbit.certifiedRMax(), options);
}

ExponentEstimate criticalExponent(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                  int nMax, int workers, const ExponentOptions& options) {
  if (nMax < 4) throw Error(ErrorCode::InvalidArgument, "nMax must be at least 4");
  return criticalExponent(orbitValues(p, phi, theta, nMax, workers), options);
}

ExponentEstimate seriesTransitionExponent(const OrbitValues& orbit) {
  if (orbit.radius < 4) throw Error(ErrorCode::InvalidArgument, "nMax must be at least 4");
  auto slopeAt = [&](double s) { return poincarePartialSum(orbit, s, 1.0).tailSlope; };
  ExponentEstimate out;
  out.method = "series-transition";
  out.certifiedRMax = orbit.certifiedRMax();
  out.sampleCount = orbit.phi.size();
  if (slopeAt(0.0) <= 0.0) return out;
  double lo = 0.0, hi = 1.0;
  while (slopeAt(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) throw Error(ErrorCode::WindowEmpty, "series slope never turns negative");
  }
  for (int it = 0; it < 100 && hi - lo > 1e-12 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slopeAt(mid) > 0.0 ? lo : hi) = mid;
  }
  out.deltaHat = 0.5 * (lo + hi);
  out.residual = hi - lo;
  return out;
}

AtomicMeasure pattersonMeasure(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, double s,
                               int n, double deltaHat, double minMargin, int workers) {
  if (s < deltaHat * (1.0 + minMargin)) {
    throw Error(ErrorCode::SubcriticalS, "s = " + std::to_string(s) + " is below deltaHat * (1 + margin) = " +
                                             std::to_string(deltaHat * (1.0 + minMargin)));
  }
  const int w = resolveWorkers(workers);
  std::vector<std::optional<Flag>> flags;
  std::vector<double> values;
  BallOptions options;
  options.workers = workers;
  options.visitor = [&](int, std::size_t offset, std::span<const ElementStack> stacks) {
    flags.resize(offset + stacks.size());
    values.resize(offset + stacks.size());
    parallelFor(stacks.size(), w, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        values[offset + i] = phiKappa(phi, stacks[i], theta);
        try {
          flags[offset + i] = uTheta(stacks[i], theta);
        } catch (const InsufficientGapError&) {
          flags[offset + i].reset();
        }
      }
    });
  };
  const WordBall ball = wordBall(p, n, options);
  const double shift = *std::min_element(values.begin(), values.end());
  double total = 0.0, excluded = 0.0;
  AtomicMeasure mu;
  mu.s = s;
  mu.phi = phi;
  for (std::size_t i = 0; i < ball.size(); ++i) {
    const double weight = std::exp(-s * (values[i] - shift));
    total += weight;
    if (!flags[i]) {
      excluded += weight;
      ++mu.excludedCount;
      continue;
    }
    mu.atoms.push_back({*flags[i], weight, ball.word(i), values[i]});
  }
  const double kept = total - excluded;
  if (!(kept > 0.0)) throw Error(ErrorCode::InvalidArgument, "no atoms pass the gap test");
  for (auto& atom : mu.atoms) atom.weight /= kept;
  mu.excludedMass = excluded / total;
  return mu;
}

double massUpToLength(const AtomicMeasure& mu, int maxLength) {
  double mass = 0.0;
  for (const auto& atom : mu.atoms) {
    if (static_cast<int>(atom.word.size()) <= maxLength) mass += atom.weight;
  }
  return mass;
}

std::vector<ResidualStats> quasiInvarianceResidual(const GroupPresentation& p, const Functional& phi,
                                                   const ThetaSet& theta, const Word& alpha, int n, int workers) {
  const ElementStack alphaInverse = p.evaluate(freelyReduce(inverseWord(alpha)));
  const int w = resolveWorkers(workers);
  std::vector<ResidualStats> out;
  BallOptions options;
  options.workers = workers;
  options.visitor = [&](int sphere, std::size_t, std::span<const ElementStack> stacks) {
    if (sphere == 0) return;
    std::vector<double> residual(stacks.size(), std::numeric_limits<double>::quiet_NaN());
    parallelFor(stacks.size(), w, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          const Flag u = uTheta(stacks[i], theta);
          const double before = phiKappa(phi, stacks[i], theta);
          const double after = phiKappa(phi, alphaInverse * stacks[i], theta);
          residual[i] = std::abs(after - before - phiIwasawa(phi, alphaInverse, u));
        } catch (const InsufficientGapError&) {
        }
      }
    });
    std::vector<double> kept;
    for (double r : residual) {
      if (!std::isnan(r)) kept.push_back(r);
    }
    ResidualStats stats;
    stats.sphere = sphere;
    stats.count = kept.size();
    if (!kept.empty()) {
      std::sort(kept.begin(), kept.end());
      stats.min = kept.front();
      stats.max = kept.back();
      const std::size_t mid = kept.size() / 2;
      stats.median = kept.size() % 2 ? kept[mid] : 0.5 * (kept[mid - 1] + kept[mid]);
    }
    out.push_back(stats);
  };
  wordBall(p, n, options);
  return out;
}

double pairDensity(const Functional& phi, double delta, const Flag& f, const Flag& g) {
  if (delta == 0.0) {
    gromovProduct(f, g);  // still enforces transversality
    return 1.0;
  }
  return std::exp(-delta * phiGromov(phi, f, g));
}

GroupPresentation subgroupPresentation(const GroupPresentation& p, const std::vector<Word>& words) {
  if (words.empty()) throw Error(ErrorCode::InvalidArgument, "subgroup needs at least one generator word");
  std::vector<Matrix> generators;
  std::vector<std::string> labels;
  for (const auto& w : words) {
    const Word reduced = freelyReduce(w);
    generators.push_back(p.evaluate(reduced).matrix());
    labels.push_back(p.wordString(reduced));
  }
  GroupPresentation sub(generators, labels, true);
  sub.setElementCap(p.elementCap());
  return sub;
}

EntropyDropReport entropyDropExperiment(const GroupPresentation& p, const std::vector<Word>& subgroupWords,
                                        const Functional& phi, const ThetaSet& theta,
                                        const EntropyDropOptions& options) {
  const GroupPresentation sub = subgroupPresentation(p, subgroupWords);
  const OrbitValues whole = orbitValues(p, phi, theta, options.nMax, options.workers);
  const OrbitValues part =
      orbitValues(sub, phi, theta, options.subgroupNMax > 0 ? options.subgroupNMax : options.nMax, options.workers);
  ExponentOptions matched = options.exponent;
  matched.rMaxOverride = std::min(whole.certifiedRMax(), part.certifiedRMax());
  EntropyDropReport report;
  report.group = criticalExponent(whole, matched);
  report.subgroup = criticalExponent(part, matched);
  report.gap = report.group.deltaHat - report.subgroup.deltaHat;

  auto flagsOf = [](const LimitSetSample& sample) {
    std::vector<Flag> out;
    for (const auto& point : sample.points) out.push_back(point.flag);
    return out;
  };
  const auto groupFlags = flagsOf(sampleLimitSet(p, theta, options.limitSetRadius, options.workers));
  const auto subFlags = flagsOf(sampleLimitSet(sub, theta, options.limitSetRadius, options.workers));
  report.groupSamples = groupFlags.size();
  report.subgroupSamples = subFlags.size();
  report.separation = directedHausdorff(groupFlags, subFlags, options.workers);
  return report;
}

ConcavityReport concavityExperiment(const GroupPresentation& p, const Functional& phi1, const Functional& phi2,
                                    const ThetaSet& theta, const std::vector<double>& lambdas, int nMax,
                                    int workers, double predictionSlack, const ExponentOptions& options) {
  BallOptions ballOptions;
  ballOptions.workers = workers;
  auto ball = std::make_shared<const WordBall>(wordBall(p, nMax, ballOptions));
  ConcavityReport report;
  report.delta1 = criticalExponent(orbitValues(ball, phi1, theta), options).deltaHat;
  report.delta2 = criticalExponent(orbitValues(ball, phi2, theta), options).deltaHat;
  if (!(report.delta1 > 0.0) || !(report.delta2 > 0.0)) {
    throw Error(ErrorCode::WindowEmpty, "endpoint exponents must be positive to normalize");
  }
  const Functional psi1 = phi1 * report.delta1;
  const Functional psi2 = phi2 * report.delta2;
  for (double lambda : lambdas) {
    const Functional mix = psi1 * lambda + psi2 * (1.0 - lambda);
    const ExponentEstimate e = criticalExponent(orbitValues(ball, mix, theta), options);
    report.rows.push_back({lambda, e.deltaHat, e.residual, e.deltaHat <= 1.0 + predictionSlack});
  }
  return report;
}

}  // namespace pslab
