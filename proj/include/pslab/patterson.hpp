#pragma once

// phi-Poincare series, critical exponent estimates, atomic Patterson-Sullivan
// approximants and the experiment harnesses built on them.

#include "pslab/cartan.hpp"
#include "pslab/flags.hpp"
#include "pslab/matgroup.hpp"

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace pslab {

/// The word ball of radius n together with phi(kappa_theta(gamma)) for every
/// element (same canonical order as the ball).
struct OrbitValues {
  std::shared_ptr<const WordBall> ball;
  std::vector<double> phi;
  int radius = 0;

  /// min over the outer sphere of phi: every element with a smaller value
  /// and word length <= radius has been enumerated, and longer words are
  /// assumed to exceed it (minimal per-letter displacement times radius).
  double certifiedRMax() const;
};

OrbitValues orbitValues(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, int n,
                        int workers = 1);
/// Re-evaluates another functional on an already enumerated ball.
OrbitValues orbitValues(std::shared_ptr<const WordBall> ball, const Functional& phi, const ThetaSet& theta);

struct PartialSum {
  double value = 0.0;
  /// Least-squares slope of log(sphere sum) against sphere index over the
  /// upper half of the spheres: negative suggests convergence at s.
  double tailSlope = 0.0;
  std::vector<double> sphereSums;
};

/// Sum over the ball of exp(-s * phi). Throws NegativePhiOnCone when the
/// fraction of outer-sphere cone directions with phi < 0 exceeds
/// `negativeFraction`.
PartialSum poincarePartialSum(const OrbitValues& orbit, double s, double negativeFraction = 0.0);
PartialSum poincarePartialSum(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, double s,
                              int n, int workers = 1, double negativeFraction = 0.0);

struct ExponentOptions {
  /// Fractions of the certified range [0, Rmax] dropped at each end.
  double dropLow = 0.2;
  double dropHigh = 0.1;
  int gridPoints = 200;
  /// When positive, replaces the certified Rmax (used to match windows).
  double rMaxOverride = 0.0;
};

struct ExponentEstimate {
  double deltaHat = 0.0;
  std::string method;
  double rMin = 0.0;
  double rMax = 0.0;
  double certifiedRMax = 0.0;
  double residual = 0.0;
  std::size_t sampleCount = 0;
  /// (R, log N(R)) on the regression grid.
  std::vector<std::pair<double, double>> table;
};

/// Slope of log #{phi <= R} against R over the certified window.
ExponentEstimate criticalExponent(const OrbitValues& orbit, const ExponentOptions& options = {});
ExponentEstimate criticalExponent(const std::vector<double>& values, double certifiedRMax,
                                  const ExponentOptions& options = {});
ExponentEstimate criticalExponent(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                  int nMax, int workers = 1, const ExponentOptions& options = {});

/// The s at which the per-sphere log-slope of the Poincare series changes
/// sign (bisection in s).
ExponentEstimate seriesTransitionExponent(const OrbitValues& orbit);

struct Atom {
  Flag flag;
  double weight = 0.0;
  Word word;
  double phi = 0.0;
};

struct AtomicMeasure {
  std::vector<Atom> atoms;
  double s = 0.0;
  Functional phi;
  /// Elements failing the gap test and their share of the unnormalized mass.
  std::size_t excludedCount = 0;
  double excludedMass = 0.0;
};

/// Atoms at U_theta(gamma), gamma in ball(n), weights proportional to
/// exp(-s phi(kappa_theta(gamma))). Throws SubcriticalS when
/// s < deltaHat * (1 + minMargin).
AtomicMeasure pattersonMeasure(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta, double s,
                               int n, double deltaHat, double minMargin = 0.01, int workers = 1);

/// Share of the mass carried by atoms with word length <= maxLength.
double massUpToLength(const AtomicMeasure& mu, int maxLength);

struct ResidualStats {
  int sphere = 0;
  std::size_t count = 0;
  double min = 0.0;
  double median = 0.0;
  double max = 0.0;
};

/// Per sphere m = 1..n, statistics of
/// |phi(kappa_theta(alpha^{-1} gamma)) - phi(kappa_theta(gamma)) - phi(B_theta(alpha^{-1}, U_theta(gamma)))|.
std::vector<ResidualStats> quasiInvarianceResidual(const GroupPresentation& p, const Functional& phi,
                                                   const ThetaSet& theta, const Word& alpha, int n,
                                                   int workers = 1);

/// exp(-delta * phi(G_theta(F, G))).
double pairDensity(const Functional& phi, double delta, const Flag& f, const Flag& g);

struct EntropyDropReport {
  ExponentEstimate group;
  ExponentEstimate subgroup;
  double gap = 0.0;
  /// sup over sampled limit flags of the group of the distance to the
  /// subgroup's sampled limit set.
  double separation = 0.0;
  std::size_t groupSamples = 0;
  std::size_t subgroupSamples = 0;
};

struct EntropyDropOptions {
  int nMax = 10;
  /// 0 means nMax.
  int subgroupNMax = 0;
  int limitSetRadius = 6;
  int workers = 1;
  ExponentOptions exponent;
};

/// Presentation of the subgroup generated by the given words.
GroupPresentation subgroupPresentation(const GroupPresentation& p, const std::vector<Word>& words);

EntropyDropReport entropyDropExperiment(const GroupPresentation& p, const std::vector<Word>& subgroupWords,
                                        const Functional& phi, const ThetaSet& theta,
                                        const EntropyDropOptions& options = {});

struct ConcavityRow {
  double lambda = 0.0;
  double deltaHat = 0.0;
  double residual = 0.0;
  bool withinPrediction = false;
};

struct ConcavityReport {
  double delta1 = 0.0;
  double delta2 = 0.0;
  std::vector<ConcavityRow> rows;
};

/// delta^{phi_lambda} for phi_lambda = lambda delta1 phi1 + (1-lambda) delta2 phi2,
/// so that both endpoints are normalized to exponent 1.
ConcavityReport concavityExperiment(const GroupPresentation& p, const Functional& phi1, const Functional& phi2,
                                    const ThetaSet& theta, const std::vector<double>& lambdas, int nMax,
                                    int workers = 1, double predictionSlack = 0.05,
                                    const ExponentOptions& options = {});

}  // namespace pslab
