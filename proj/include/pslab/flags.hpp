#pragma once

// Points of the partial flag manifold F_theta, the Cartan limit map U_theta,
// transversality, and finite samples of theta-limit sets.

#include "pslab/cartan.hpp"
#include "pslab/linalg.hpp"
#include "pslab/matgroup.hpp"

#include <cstddef>
#include <vector>

namespace pslab {

inline constexpr double kDefaultGapTolerance = 1e-10;
inline constexpr double kDefaultTransversalityTolerance = 1e-8;

/// A flag stored as an orthonormal frame Q; F^k is the span of the first k
/// columns for k in theta. Columns beyond max(theta) only complete the frame.
class Flag {
 public:
  Flag(ThetaSet theta, Matrix frame);

  /// span(e_1..e_k) for each k.
  static Flag standard(const ThetaSet& theta);
  /// span(e_d, ..., e_{d-k+1}) for each k.
  static Flag opposite(const ThetaSet& theta);

  const ThetaSet& theta() const { return theta_; }
  const Matrix& frame() const { return frame_; }
  int dim() const { return static_cast<int>(frame_.rows()); }

  /// Orthonormal basis of F^k (d x k).
  Matrix subspace(int k) const { return frame_.leftCols(k); }
  /// Orthonormal basis of the orthogonal complement of F^k (d x (d-k)).
  Matrix complement(int k) const { return frame_.rightCols(dim() - k); }
  /// Orthogonal projector onto F^k.
  Matrix projector(int k) const;

  /// Same subspaces for every k in theta (sine of largest principal angle
  /// below `tolerance`).
  bool sameAs(const Flag& o, double tolerance = 1e-7) const;

 private:
  ThetaSet theta_;
  Matrix frame_;
};

/// Builds the canonical frame of a nested family from one orthonormal basis
/// per k in theta (basis(k) is d x k). The subspaces must be nested.
Flag assembleFlag(const ThetaSet& theta, int d, const std::vector<Matrix>& bases);

/// Flag of leading left singular directions. Throws InsufficientGapError when
/// alpha_k(kappa(A)) <= gapTolerance for some k in theta.
Flag uTheta(const ElementStack& a, const ThetaSet& theta, double gapTolerance = kDefaultGapTolerance);
Flag uTheta(const Matrix& a, const ThetaSet& theta, double gapTolerance = kDefaultGapTolerance);

/// A . F, with the same theta.
Flag actOnFlag(const ElementStack& a, const Flag& f);
Flag actOnFlag(const Matrix& a, const Flag& f);

struct Transversality {
  bool transverse = false;
  /// min over k in theta of |det[basis F^k | basis G^{d-k}]|
  double witness = 0.0;
  /// Index attaining the minimum.
  int worstIndex = 0;
};

Transversality isTransverse(const Flag& f, const Flag& g,
                            double tolerance = kDefaultTransversalityTolerance);

/// max over k in theta of the sine of the largest principal angle between F^k
/// and G^k.
double flagDistance(const Flag& f, const Flag& g);

struct LimitSample {
  Flag flag;
  Word word;
};

struct LimitSetSample {
  std::vector<LimitSample> points;
  /// Sphere elements skipped because of the gap precondition.
  std::size_t skipped = 0;
};

/// U_theta over the word sphere of radius n, in canonical word order.
LimitSetSample sampleLimitSet(const GroupPresentation& p, const ThetaSet& theta, int n, int workers = 1,
                              double gapTolerance = kDefaultGapTolerance);

/// Flag of dominant generalized eigenspaces. Throws NotProximal when
/// alpha_k(nu(A)) <= gapTolerance for some k in theta.
Flag attractingFixedFlag(const Matrix& a, const ThetaSet& theta, double gapTolerance = kDefaultGapTolerance);

/// Hausdorff distance between two finite flag sets and the one-sided
/// distance sup_{x in a} inf_{y in b} d(x, y).
double directedHausdorff(const std::vector<Flag>& a, const std::vector<Flag>& b, int workers = 1);
double hausdorffDistance(const std::vector<Flag>& a, const std::vector<Flag>& b, int workers = 1);

}  // namespace pslab
