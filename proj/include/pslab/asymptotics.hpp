#pragma once

// Closed-geodesic counting against e^{delta T}/(delta T), and box-counting
// dimension of sampled limit sets.

#include "pslab/cartan.hpp"
#include "pslab/flags.hpp"
#include "pslab/matgroup.hpp"
#include "pslab/patterson.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pslab {

struct CountRow {
  double T = 0.0;
  /// Oriented count: gamma and gamma^{-1} are different classes.
  std::size_t count = 0;
  /// count / 2, the unoriented (closed geodesic) count.
  double unorientedCount = 0.0;
  double prediction = 0.0;
  double ratio = 0.0;
  /// log(count) / T (NaN when count is 0).
  double logCountOverT = 0.0;
  bool certified = false;
};

struct CountTable {
  std::vector<CountRow> rows;
  double deltaHat = 0.0;
  int wordLengthMax = 0;
  bool primitiveOnly = true;
  /// min over enumerated classes of phi(nu) / (cyclic word length).
  double perLetterGrowth = 0.0;
  /// Classes of word length > wordLengthMax have length >= this (assuming the
  /// per-letter growth above holds for them too).
  double certifiedCutoff = 0.0;
  std::size_t classCount = 0;
  /// Classes with phi(nu) <= 0 (not counted).
  std::size_t nonPositiveCount = 0;
  std::size_t nuCollisions = 0;

  /// Largest certified row, or nullptr.
  const CountRow* lastCertified() const;
};

/// T values phi(nu_theta) of one representative per class (the order of
/// conjugacyClasses), for free presentations.
std::vector<double> classLengths(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                 int wordLengthMax, bool primitiveOnly, int workers = 1);

/// N(T) = #{classes with 0 < phi(nu_theta) <= T} on T = Tmax * i / rowCount,
/// i = 1..rowCount. Rows at or beyond the certified cutoff are flagged
/// uncertified rather than dropped.
CountTable countClosedGeodesics(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                double tMax, int rowCount, int wordLengthMax, bool primitiveOnly, double deltaHat,
                                int workers = 1);

/// Points to be box-counted, together with their metric.
class PointSet {
 public:
  enum class Metric { Euclidean, Chordal, Flag };

  static PointSet euclidean(std::vector<Vector> points);
  /// Lines through the given nonzero vectors, with d = sin(angle).
  static PointSet projective(const std::vector<Vector>& points);
  static PointSet flags(std::vector<Flag> flags);

  Metric metric() const { return metric_; }
  std::size_t size() const { return static_cast<std::size_t>(coords_.rows()); }
  double distance(std::size_t i, std::size_t j) const;
  /// Embedding coordinates; every coordinate difference is at most the
  /// distance between the points.
  const Matrix& coordinates() const { return coords_; }

  /// Sorted lexicographically by coordinates with exact repeats removed.
  PointSet canonical(double tolerance = 1e-12) const;

 private:
  Metric metric_ = Metric::Euclidean;
  Matrix coords_;
  std::vector<Matrix> frames_;  // unit vectors (chordal) or full frames (flags)
  std::vector<int> thetaIndices_;
};

struct BoxDimension {
  double dimension = 0.0;
  double residual = 0.0;
  std::size_t pointCount = 0;
  /// (scale, covering count) for every scale tried.
  std::vector<std::pair<double, std::size_t>> scales;
  /// Indices into `scales` used by the fit.
  std::size_t fitBegin = 0;
  std::size_t fitEnd = 0;
  std::size_t saturated = 0;
};

/// Number of centers of the greedy cover by closed eps-balls, visiting the
/// points in their stored order.
std::size_t greedyCoverCount(const PointSet& points, double eps);

/// Least-squares slope of log N(eps) against log(1/eps). With an empty grid
/// the scales are diam * 2^{-j/4} down to saturation and the fit uses
/// 10 <= N <= n/10. Fewer than 10 distinct points give dimension 0. Throws
/// DegenerateScales when more than 40% of the scales saturate or fewer than 5
/// are usable.
BoxDimension boxCountingDimension(const PointSet& points, const std::vector<double>& scaleGrid = {},
                                  int workers = 1);

/// Left endpoints of the 2^depth intervals of the middle-thirds construction.
std::vector<Vector> cantorSample(int depth);

struct DimensionReport {
  ExponentEstimate exponent;
  BoxDimension box;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  double difference = 0.0;
};

/// delta^{alpha_1} on the ball of radius nMax against the box dimension of the
/// lines U_1(gamma) for gamma on the sphere of radius nMax (chordal metric).
DimensionReport hausdorffVsExponentExperiment(const GroupPresentation& p, int nMax, int workers = 1,
                                              const ExponentOptions& options = {});

}  // namespace pslab
