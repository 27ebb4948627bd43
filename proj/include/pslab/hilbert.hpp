#pragma once

// Properly convex domains in an affine chart (ellipsoids and convex polygons),
// the Hilbert metric, shadows, Busemann approximants, and the Klein-model
// identification used for Fuchsian families.

#include "pslab/cartan.hpp"
#include "pslab/flags.hpp"
#include "pslab/linalg.hpp"
#include "pslab/matgroup.hpp"
#include "pslab/patterson.hpp"

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace pslab {

class ConvexDomain {
 public:
  enum class Kind { Ellipsoid, Polytope };

  /// {x : (x,1)^T Q (x,1) < 0} for a symmetric (m+1)x(m+1) quadric whose
  /// affine block is positive definite (so the region is a bounded ellipsoid).
  static ConvexDomain ellipsoid(Matrix quadric, Vector basepoint);
  /// The unit ball of R^m with basepoint 0 (Klein model).
  static ConvexDomain kleinBall(int m);
  /// Convex polygon in the plane from vertices in convex position (either
  /// orientation).
  static ConvexDomain polygon(const std::vector<Vector>& vertices, Vector basepoint);

  Kind kind() const { return kind_; }
  int chartDimension() const { return m_; }
  const Vector& basepoint() const { return basepoint_; }
  const Matrix& quadric() const { return quadric_; }
  const std::vector<Vector>& vertices() const { return vertices_; }

  bool contains(const Vector& x) const;

  /// For distinct interior x, y returns (a, b) > 0 such that the boundary
  /// points on the line are x - a (y - x) and y + b (y - x).
  std::pair<double, double> chordParameters(const Vector& x, const Vector& y) const;

  /// Exit point of the ray from interior `from` in direction `direction`.
  Vector exitPoint(const Vector& from, const Vector& direction) const;

  /// Image under the projective map x -> T(x,1) (normalized), with the
  /// basepoint carried along. T must keep the closure in the chart.
  ConvexDomain transformed(const Matrix& t) const;

  /// Boundary point in direction `angle` from the basepoint (planar chart).
  Vector boundaryAtAngle(double angle) const;
  /// Angle of a point as seen from the basepoint (planar chart).
  double angleOf(const Vector& z) const;

 private:
  Kind kind_ = Kind::Ellipsoid;
  int m_ = 0;
  Matrix quadric_;
  std::vector<Vector> vertices_;
  // Polygon half-planes n_i . x <= c_i.
  std::vector<Vector> normals_;
  std::vector<double> offsets_;
  Vector basepoint_;
};

/// x -> T(x,1) in the affine chart.
Vector applyProjective(const Matrix& t, const Vector& x);

/// 1/2 log of the cross ratio. Throws BoundaryPoint for points outside the
/// open domain.
double hilbertDistance(const ConvexDomain& omega, const Vector& x, const Vector& y);

/// The point at Hilbert distance s from `source` on the ray towards the
/// boundary point z.
Vector pointOnRay(const ConvexDomain& omega, const Vector& source, const Vector& z, double s);

/// min over the ray [source, z) of d(., p), searched on s in [sLo, sHi]
/// (arclength from source) by sampling plus golden-section refinement.
double distanceToRay(const ConvexDomain& omega, const Vector& source, const Vector& z, const Vector& p);

/// z in O_r(source, p): the ray from source to z passes within r of p.
/// Values within 1e-9 of r count as inside.
bool shadowContains(const ConvexDomain& omega, const Vector& source, const Vector& p, double r, const Vector& z);

struct BusemannEstimate {
  double value = 0.0;
  double errorBar = 0.0;
  std::vector<double> sequence;
  /// Set for polygon vertices, where the limit may depend on the approach.
  bool nonSmoothWarning = false;
};

/// lim d(y, x) - d(y, b0) as y -> z along [b0, z), with Richardson
/// extrapolation on y_j = z - 2^-j (z - b0).
BusemannEstimate busemannApprox(const ConvexDomain& omega, const Vector& z, const Vector& x, int steps = 30);

/// Boundary arc (angle interval about the basepoint, lo <= hi, width at most
/// 2 pi) of O_r(source, p) for planar domains, found by bisection on the
/// shadowContains predicate. A full circle is returned as (c - pi, c + pi).
std::pair<double, double> shadowArc(const ConvexDomain& omega, const Vector& source, const Vector& p, double r);

// --- Fuchsian families in the Klein disk -------------------------------

/// The action S -> B S B^T of SL(2,R) on symmetric matrices
/// S = [[t + x, y], [y, t - x]], in coordinates (x, y, t). Preserves
/// t^2 - x^2 - y^2 and maps SO(2) into SO(3).
Matrix lorentzLift(const Matrix& b);

/// Klein-chart point of L (0, 0, 1).
Vector kleinOrbitPoint(const Matrix& lift);

/// Klein-disk boundary point of the line F^1 (projected onto the circle).
Vector kleinBoundaryPoint(const Flag& f);

/// Boundary point of the attracting (or, for parabolic B, the unique)
/// fixed point of B in P^1, in the Klein chart.
Vector kleinFixedPoint(const Matrix& b);

struct ShadowOptions {
  int exponentRadius = 12;
  int measureRadius = 11;
  double sEpsilon = 0.05;
  int sphereMin = 4;
  int sphereMax = 8;
  double rFactor = 2.0;
  std::vector<double> r0Grid = {0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5, 3.0};
  double epsilonTarget = 0.1;
  int epsilonRadius = 6;
  /// Atoms with shorter words are dropped and the rest renormalized, so that
  /// shadows of sphere-m points never see the heavy atoms of short words
  /// sitting exactly on their own axis. 0 means sphereMax + 1.
  int atomMinLength = 0;
  int workers = 1;
};

struct ShadowSphere {
  int sphere = 0;
  std::size_t count = 0;
  double minRatio = 0.0;
  double maxRatio = 0.0;
  double spread = 0.0;
};

struct ShadowReport {
  double deltaHat = 0.0;
  double s = 0.0;
  double r0 = 0.0;
  double epsilon0 = 0.0;
  double r = 0.0;
  double bound = 0.0;
  std::vector<std::pair<double, double>> epsilonByR;
  std::vector<ShadowSphere> spheres;
  double overallSpread = 0.0;
  bool monotoneGrowth = false;
  std::vector<std::string> warnings;
};

/// Shadow Lemma ratios rho(gamma) = mu(O_r(b0, gamma b0)) exp(delta phi(kappa_theta(gamma)))
/// for a Fuchsian presentation (d = 2) acting on the Klein disk through the
/// Lorentz lift; phi = alpha_1 on the lift. Throws UnsupportedFamily otherwise.
ShadowReport shadowMeasureCheck(const GroupPresentation& p, const ShadowOptions& options = {});

/// Number of orbit points gamma b0 per word sphere within r of the ray [b0, z)
/// (Fuchsian presentations only).
std::vector<std::size_t> conicalityScore(const GroupPresentation& p, const Vector& z, double r, int n,
                                         int workers = 1);

}  // namespace pslab
