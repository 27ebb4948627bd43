#include "pslab/hilbert.hpp"

#include "pslab/cocycle.hpp"
#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pslab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kTieSlack = 1e-9;

Vector homogeneous(const Vector& x) {
  Vector h(x.size() + 1);
  h << x, 1.0;
  return h;
}

// Positive root of A t^2 + 2 B t + C = 0 with A > 0, C < 0, without
// cancellation.
double positiveRoot(double a, double b, double c) {
  const double disc = std::sqrt(std::max(0.0, b * b - a * c));
  return b <= 0.0 ? (disc - b) / a : -c / (b + disc);
}

}  // namespace

ConvexDomain ConvexDomain::ellipsoid(Matrix quadric, Vector basepoint) {
  const auto n = quadric.rows();
  if (quadric.cols() != n || n < 2 || basepoint.size() != n - 1) {
    throw Error(ErrorCode::InvalidArgument, "quadric must be (m+1)x(m+1) with an m-dimensional basepoint");
  }
  if ((quadric - quadric.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, quadric.norm())) {
    throw Error(ErrorCode::InvalidArgument, "quadric is not symmetric");
  }
  ConvexDomain d;
  d.kind_ = Kind::Ellipsoid;
  d.m_ = static_cast<int>(n - 1);
  d.quadric_ = 0.5 * (quadric + quadric.transpose());
  Eigen::LLT<Matrix> llt(d.quadric_.topLeftCorner(n - 1, n - 1));
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::InvalidArgument, "quadric does not bound an ellipsoid in the chart");
  }
  d.basepoint_ = std::move(basepoint);
  if (!d.contains(d.basepoint_)) throw Error(ErrorCode::BoundaryPoint, "basepoint is not interior");
  return d;
}

ConvexDomain ConvexDomain::kleinBall(int m) {
  Matrix q = Matrix::Identity(m + 1, m + 1);
  q(m, m) = -1.0;
  return ellipsoid(q, Vector::Zero(m));
}

ConvexDomain ConvexDomain::polygon(const std::vector<Vector>& vertices, Vector basepoint) {
  if (vertices.size() < 3 || basepoint.size() != 2) {
    throw Error(ErrorCode::InvalidArgument, "polygons need at least 3 planar vertices");
  }
  ConvexDomain d;
  d.kind_ = Kind::Polytope;
  d.m_ = 2;
  d.vertices_ = vertices;
  d.basepoint_ = std::move(basepoint);
  const std::size_t n = vertices.size();
  double signedArea = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& p = vertices[i];
    const Vector& q = vertices[(i + 1) % n];
    signedArea += p(0) * q(1) - q(0) * p(1);
  }
  const double orientation = signedArea > 0.0 ? 1.0 : -1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vector& p = vertices[i];
    const Vector& q = vertices[(i + 1) % n];
    Vector normal(2);
    normal << orientation * (q(1) - p(1)), -orientation * (q(0) - p(0));
    normal.normalize();
    d.normals_.push_back(normal);
    d.offsets_.push_back(normal.dot(p));
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i && j != (i + 1) % n && normal.dot(vertices[j]) > d.offsets_.back() - 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "polygon vertices are not in strictly convex position");
      }
    }
  }
  if (!d.contains(d.basepoint_)) throw Error(ErrorCode::BoundaryPoint, "basepoint is not interior");
  return d;
}

bool ConvexDomain::contains(const Vector& x) const {
  if (x.size() != m_ || !x.allFinite()) return false;
  if (kind_ == Kind::Ellipsoid) {
    const Vector h = homogeneous(x);
    return h.dot(quadric_ * h) < 0.0;
  }
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    if (!(normals_[i].dot(x) < offsets_[i])) return false;
  }
  return true;
}

std::pair<double, double> ConvexDomain::chordParameters(const Vector& x, const Vector& y) const {
  const Vector v = y - x;
  if (kind_ == Kind::Ellipsoid) {
    const auto m = static_cast<Eigen::Index>(m_);
    const Matrix& q = quadric_;
    const double a = v.dot(q.topLeftCorner(m, m) * v);
    auto half = [&](const Vector& base) {
      const Vector h = homogeneous(base);
      const double b = (q.topRows(m).transpose() * v).dot(h);
      const double c = h.dot(q * h);
      return std::make_pair(b, c);
    };
    const auto [bx, cx] = half(x);
    const auto [by, cy] = half(y);
    if (!(cx < 0.0) || !(cy < 0.0)) throw Error(ErrorCode::BoundaryPoint, "point is not interior");
    // Backward root from x (t -> -t) and forward root from y.
    return {positiveRoot(a, -bx, cx), positiveRoot(a, by, cy)};
  }
  double back = std::numeric_limits<double>::infinity();
  double forward = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    const double slope = normals_[i].dot(v);
    const double slackX = offsets_[i] - normals_[i].dot(x);
    const double slackY = offsets_[i] - normals_[i].dot(y);
    if (!(slackX > 0.0) || !(slackY > 0.0)) throw Error(ErrorCode::BoundaryPoint, "point is not interior");
    if (slope > 0.0) forward = std::min(forward, slackY / slope);
    if (slope < 0.0) back = std::min(back, slackX / -slope);
  }
  return {back, forward};
}

Vector ConvexDomain::exitPoint(const Vector& from, const Vector& direction) const {
  if (kind_ == Kind::Ellipsoid) {
    const auto m = static_cast<Eigen::Index>(m_);
    const Vector h = homogeneous(from);
    const double a = direction.dot(quadric_.topLeftCorner(m, m) * direction);
    const double b = (quadric_.topRows(m).transpose() * direction).dot(h);
    const double c = h.dot(quadric_ * h);
    if (!(c < 0.0)) throw Error(ErrorCode::BoundaryPoint, "ray origin is not interior");
    return from + positiveRoot(a, b, c) * direction;
  }
  double t = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < normals_.size(); ++i) {
    const double slope = normals_[i].dot(direction);
    if (slope > 0.0) t = std::min(t, (offsets_[i] - normals_[i].dot(from)) / slope);
  }
  return from + t * direction;
}

ConvexDomain ConvexDomain::transformed(const Matrix& t) const {
  if (t.rows() != m_ + 1 || t.cols() != m_ + 1) throw Error(ErrorCode::InvalidArgument, "bad transform size");
  if (kind_ == Kind::Ellipsoid) {
    const Matrix inv = t.fullPivLu().inverse();
    // Keep the sign convention: the image of the basepoint stays negative.
    return ellipsoid(inv.transpose() * quadric_ * inv, applyProjective(t, basepoint_));
  }
  std::vector<Vector> image;
  for (const auto& v : vertices_) {
    if (!((t * homogeneous(v))(m_) > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "transform sends the polygon across the chart boundary");
    }
    image.push_back(applyProjective(t, v));
  }
  return polygon(image, applyProjective(t, basepoint_));
}

Vector ConvexDomain::boundaryAtAngle(double angle) const {
  Vector dir(2);
  dir << std::cos(angle), std::sin(angle);
  return exitPoint(basepoint_, dir);
}

double ConvexDomain::angleOf(const Vector& z) const {
  return std::atan2(z(1) - basepoint_(1), z(0) - basepoint_(0));
}

Vector applyProjective(const Matrix& t, const Vector& x) {
  const Vector h = t * homogeneous(x);
  const auto m = x.size();
  return h.head(m) / h(m);
}

double hilbertDistance(const ConvexDomain& omega, const Vector& x, const Vector& y) {
  if (!omega.contains(x) || !omega.contains(y)) throw Error(ErrorCode::BoundaryPoint, "point is not interior");
  if (x == y) return 0.0;
  const auto [a, b] = omega.chordParameters(x, y);
  if (!(a > 0.0) || !(b > 0.0)) throw Error(ErrorCode::BoundaryPoint, "degenerate chord");
  // Both ends at infinity only happens for x == y up to rounding.
  const double left = std::isfinite(a) ? std::log1p(1.0 / a) : 0.0;
  const double right = std::isfinite(b) ? std::log1p(1.0 / b) : 0.0;
  return 0.5 * (left + right);
}

Vector pointOnRay(const ConvexDomain& omega, const Vector& source, const Vector& z, double s) {
  const Vector back = omega.exitPoint(source, source - z);
  const double along = (z - source).norm();
  const double behind = (source - back).norm() / along;
  const double e = std::exp(2.0 * s);
  const double remaining = (1.0 + behind) / (1.0 + e * behind);
  return z + remaining * (source - z);
}

namespace {

// Minimum of d(pointOnRay(s), p) over [lo, hi]; unrepresentable points
// (rounded onto the boundary) are skipped. Stops early once below `stopBelow`.
double minimizeAlongRay(const ConvexDomain& omega, const Vector& source, const Vector& z, const Vector& p, double lo,
                        double hi, double stopBelow) {
  const Vector back = omega.exitPoint(source, source - z);
  const double behind = (source - back).norm() / (z - source).norm();
  auto eval = [&](double s) {
    const double remaining = (1.0 + behind) / (1.0 + std::exp(2.0 * s) * behind);
    const Vector y = z + remaining * (source - z);
    if (!omega.contains(y)) return std::numeric_limits<double>::infinity();
    return hilbertDistance(omega, y, p);
  };
  const int samples = omega.kind() == ConvexDomain::Kind::Polytope ? 512 : 32;
  double best = std::numeric_limits<double>::infinity();
  int bestIndex = 0;
  for (int i = 0; i < samples; ++i) {
    const double s = lo + (hi - lo) * static_cast<double>(i) / (samples - 1);
    const double v = eval(s);
    if (v < best) {
      best = v;
      bestIndex = i;
    }
    if (best < stopBelow) return best;
  }
  const double step = (hi - lo) / (samples - 1);
  double a = std::max(lo, lo + (bestIndex - 1) * step);
  double b = std::min(hi, lo + (bestIndex + 1) * step);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double fc = eval(c), fd = eval(d);
  for (int it = 0; it < 40; ++it) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - ratio * (b - a);
      fc = eval(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + ratio * (b - a);
      fd = eval(d);
    }
    best = std::min({best, fc, fd});
    if (best < stopBelow) return best;
  }
  return best;
}

}  // namespace

double distanceToRay(const ConvexDomain& omega, const Vector& source, const Vector& z, const Vector& p) {
  const double base = hilbertDistance(omega, source, p);
  if (base == 0.0) return 0.0;
  return std::min(base, minimizeAlongRay(omega, source, z, p, 0.0, 2.0 * base + 1.0,
                                         -std::numeric_limits<double>::infinity()));
}

bool shadowContains(const ConvexDomain& omega, const Vector& source, const Vector& p, double r, const Vector& z) {
  if (!(r > 0.0)) throw Error(ErrorCode::InvalidArgument, "shadow radius must be positive");
  const double base = hilbertDistance(omega, source, p);
  const double threshold = r + kTieSlack;
  if (base < threshold) return true;
  // d(y, p) >= |s - d(source, p)|, so only s within r of d(source, p) matter.
  return minimizeAlongRay(omega, source, z, p, base - threshold, base + threshold, threshold) < threshold;
}

BusemannEstimate busemannApprox(const ConvexDomain& omega, const Vector& z, const Vector& x, int steps) {
  const Vector& b0 = omega.basepoint();
  BusemannEstimate out;
  if (omega.kind() == ConvexDomain::Kind::Polytope) {
    for (const auto& v : omega.vertices()) {
      if ((v - z).norm() < 1e-9) out.nonSmoothWarning = true;
    }
  }
  if (x == b0) {
    out.sequence.assign(static_cast<std::size_t>(std::max(steps, 1)), 0.0);
    return out;
  }
  std::vector<double> raw;
  double scale = 0.5;
  for (int j = 1; j <= steps; ++j, scale *= 0.5) {
    const Vector y = z - scale * (z - b0);
    if (!omega.contains(y)) break;
    raw.push_back(hilbertDistance(omega, y, x) - hilbertDistance(omega, y, b0));
  }
  if (raw.empty()) throw Error(ErrorCode::BoundaryPoint, "no interior approximants");
  // The approximants converge linearly in 2^-j; one Richardson step.
  for (std::size_t j = 1; j < raw.size(); ++j) out.sequence.push_back(2.0 * raw[j] - raw[j - 1]);
  if (out.sequence.empty()) out.sequence.push_back(raw.front());
  out.value = out.sequence.back();
  if (out.sequence.size() >= 2) {
    const std::size_t n = out.sequence.size();
    out.errorBar = std::max(std::abs(out.sequence[n - 1] - out.sequence[n - 2]), 1e-12);
  } else {
    out.errorBar = std::numeric_limits<double>::infinity();
  }
  return out;
}

std::pair<double, double> shadowArc(const ConvexDomain& omega, const Vector& source, const Vector& p, double r) {
  if (omega.chartDimension() != 2) throw Error(ErrorCode::UnsupportedFamily, "shadow arcs need a planar chart");
  const double base = hilbertDistance(omega, source, p);
  if (base < r + kTieSlack) return {-std::numbers::pi, std::numbers::pi};
  const double center = omega.angleOf(omega.exitPoint(source, p - source));
  auto inside = [&](double angle) { return shadowContains(omega, source, p, r, omega.boundaryAtAngle(angle)); };
  auto extent = [&](double sign) {
    if (inside(center + sign * std::numbers::pi)) return std::numbers::pi;
    double lo = 0.0, hi = std::numbers::pi;
    for (int it = 0; it < 48; ++it) {
      const double mid = 0.5 * (lo + hi);
      (inside(center + sign * mid) ? lo : hi) = mid;
    }
    return lo;
  };
  const double minus = extent(-1.0);
  const double plus = extent(1.0);
  if (minus + plus >= kTwoPi) return {center - std::numbers::pi, center + std::numbers::pi};
  return {center - minus, center + plus};
}

Matrix lorentzLift(const Matrix& b) {
  const Matrix m = normalizeUnimodular(b);
  if (m.rows() != 2) throw Error(ErrorCode::UnsupportedFamily, "the Lorentz lift is defined on SL(2,R)");
  Matrix basis[3];
  basis[0] = (Matrix(2, 2) << 1, 0, 0, -1).finished();
  basis[1] = (Matrix(2, 2) << 0, 1, 1, 0).finished();
  basis[2] = Matrix::Identity(2, 2);
  Matrix out(3, 3);
  for (int j = 0; j < 3; ++j) {
    const Matrix s = m * basis[j] * m.transpose();
    out(0, j) = 0.5 * (s(0, 0) - s(1, 1));
    out(1, j) = s(0, 1);
    out(2, j) = 0.5 * (s(0, 0) + s(1, 1));
  }
  return out;
}

Vector kleinOrbitPoint(const Matrix& lift) {
  Vector p(2);
  p << lift(0, 2) / lift(2, 2), lift(1, 2) / lift(2, 2);
  return p;
}

Vector kleinBoundaryPoint(const Flag& f) {
  if (f.dim() != 3) throw Error(ErrorCode::UnsupportedFamily, "Klein boundary points come from lines in R^3");
  const Vector v = f.frame().col(0);
  Vector p(2);
  p << v(0) / v(2), v(1) / v(2);
  return p / p.norm();
}

Vector kleinFixedPoint(const Matrix& b) {
  const Matrix m = normalizeUnimodular(b);
  if (m.rows() != 2) throw Error(ErrorCode::UnsupportedFamily, "fixed points are computed for SL(2,R)");
  const double tr = m.trace();
  const double disc = tr * tr - 4.0;
  if (disc < -1e-12) throw Error(ErrorCode::NotProximal, "elliptic element has no boundary fixed point");
  const double lambda = 0.5 * (tr + (tr >= 0.0 ? 1.0 : -1.0) * std::sqrt(std::max(0.0, disc)));
  // Kernel of B - lambda from whichever row is better conditioned.
  Vector v(2);
  const double r0 = std::hypot(m(0, 0) - lambda, m(0, 1));
  const double r1 = std::hypot(m(1, 0), m(1, 1) - lambda);
  if (r0 >= r1) {
    v << m(0, 1), lambda - m(0, 0);
  } else {
    v << lambda - m(1, 1), m(1, 0);
  }
  if (v.norm() == 0.0) v << 1.0, 0.0;  // B = +-I fixes everything
  const double n2 = v.squaredNorm();
  Vector z(2);
  z << (v(0) * v(0) - v(1) * v(1)) / n2, 2.0 * v(0) * v(1) / n2;
  return z;
}

namespace {

GroupPresentation liftPresentation(const GroupPresentation& p) {
  if (p.dimension() != 2) {
    throw Error(ErrorCode::UnsupportedFamily, "Klein-disk identification is available for SL(2,R) presentations");
  }
  std::vector<Matrix> lifted;
  for (const auto& g : p.generators()) lifted.push_back(lorentzLift(g));
  GroupPresentation out(lifted, p.labels(), p.assumeFree());
  out.setElementCap(p.elementCap());
  out.setDedupTolerance(p.dedupTolerance());
  return out;
}

// Atoms sorted by boundary angle with prefix sums, for arc queries.
struct ArcMeasure {
  std::vector<double> angles;
  std::vector<double> prefix;  // prefix[i] = sum of weights of atoms [0, i)

  double massIn(double lo, double hi) const {
    if (hi - lo >= kTwoPi) return prefix.back();
    // Normalize lo into [-pi, pi).
    const double shift = std::floor((lo + std::numbers::pi) / kTwoPi) * kTwoPi;
    lo -= shift;
    hi -= shift;
    auto upTo = [&](double a) {
      return prefix[static_cast<std::size_t>(std::upper_bound(angles.begin(), angles.end(), a) - angles.begin())];
    };
    auto below = [&](double a) {
      return prefix[static_cast<std::size_t>(std::lower_bound(angles.begin(), angles.end(), a) - angles.begin())];
    };
    if (hi <= std::numbers::pi) return upTo(hi) - below(lo);
    return (prefix.back() - below(lo)) + upTo(hi - kTwoPi);
  }
};

}  // namespace

ShadowReport shadowMeasureCheck(const GroupPresentation& p, const ShadowOptions& options) {
  const GroupPresentation lifted = liftPresentation(p);
  const ConvexDomain disk = ConvexDomain::kleinBall(2);
  const ThetaSet theta(3, {1, 2});
  const Functional phi = Functional::alpha(1, 3);
  const int workers = resolveWorkers(options.workers);

  ShadowReport report;
  report.deltaHat = criticalExponent(lifted, phi, theta, options.exponentRadius, workers).deltaHat;
  report.s = report.deltaHat * (1.0 + options.sEpsilon);
  const AtomicMeasure mu =
      pattersonMeasure(lifted, phi, theta, report.s, options.measureRadius, report.deltaHat, 0.0, workers);
  if (mu.excludedCount > 0) {
    report.warnings.push_back(std::to_string(mu.excludedCount) + " elements excluded by the gap test");
  }

  ArcMeasure arcs;
  {
    const int minLength = options.atomMinLength > 0 ? options.atomMinLength : options.sphereMax + 1;
    std::vector<std::pair<double, double>> byAngle;
    double total = 0.0;
    for (const auto& atom : mu.atoms) {
      if (static_cast<int>(atom.word.size()) < minLength) continue;
      byAngle.emplace_back(disk.angleOf(kleinBoundaryPoint(atom.flag)), atom.weight);
      total += atom.weight;
    }
    if (byAngle.empty()) throw Error(ErrorCode::InvalidArgument, "no atoms beyond the minimum word length");
    std::sort(byAngle.begin(), byAngle.end());
    arcs.prefix.push_back(0.0);
    for (const auto& [angle, weight] : byAngle) {
      arcs.angles.push_back(angle);
      arcs.prefix.push_back(arcs.prefix.back() + weight / total);
    }
  }

  const int radius = std::max(options.sphereMax, options.epsilonRadius);
  BallOptions ballOptions;
  ballOptions.workers = workers;
  ballOptions.keepStacks = true;
  const WordBall ball = wordBall(lifted, radius, ballOptions);
  std::vector<Vector> orbit(ball.size());
  std::vector<double> phiValues(ball.size());
  for (std::size_t i = 0; i < ball.size(); ++i) {
    orbit[i] = kleinOrbitPoint(ball.stack(i).matrix());
    phiValues[i] = phiKappa(phi, ball.stack(i), theta);
  }
  const Vector& b0 = disk.basepoint();

  // epsilon_0(R) = min over the ball of mu(O_R(gamma b0, b0)).
  const std::size_t epsilonCount = ball.sphereEnd(options.epsilonRadius);
  bool chosen = false;
  double bestEpsilon = -1.0, bestR = 0.0;
  for (double r0 : options.r0Grid) {
    std::vector<double> masses(epsilonCount);
    parallelFor(epsilonCount, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const auto [lo, hi] = shadowArc(disk, orbit[i], b0, r0);
        masses[i] = arcs.massIn(lo, hi);
      }
    });
    const double eps = *std::min_element(masses.begin(), masses.end());
    report.epsilonByR.emplace_back(r0, eps);
    if (eps > bestEpsilon) {
      bestEpsilon = eps;
      bestR = r0;
    }
    if (eps >= options.epsilonTarget) {
      report.r0 = r0;
      report.epsilon0 = eps;
      chosen = true;
      break;
    }
  }
  if (!chosen) {
    report.r0 = bestR;
    report.epsilon0 = bestEpsilon;
    report.warnings.push_back("no grid radius reached the epsilon target; using the best one");
  }
  report.r = options.rFactor * report.r0;
  report.bound = report.epsilon0 > 0.0 ? std::exp(2.0 * report.r * report.deltaHat) / report.epsilon0
                                       : std::numeric_limits<double>::infinity();

  double overallMin = std::numeric_limits<double>::infinity(), overallMax = 0.0;
  for (int m = options.sphereMin; m <= options.sphereMax; ++m) {
    const std::size_t begin = ball.sphereBegin(m), count = ball.sphereEnd(m) - begin;
    std::vector<double> ratios(count);
    parallelFor(count, workers, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        const auto [a, b] = shadowArc(disk, b0, orbit[begin + i], report.r);
        ratios[i] = arcs.massIn(a, b) * std::exp(report.deltaHat * phiValues[begin + i]);
      }
    });
    ShadowSphere row;
    row.sphere = m;
    row.count = count;
    row.minRatio = *std::min_element(ratios.begin(), ratios.end());
    row.maxRatio = *std::max_element(ratios.begin(), ratios.end());
    row.spread = row.minRatio > 0.0 ? row.maxRatio / row.minRatio : std::numeric_limits<double>::infinity();
    overallMin = std::min(overallMin, row.minRatio);
    overallMax = std::max(overallMax, row.maxRatio);
    report.spheres.push_back(row);
  }
  report.overallSpread = overallMin > 0.0 ? overallMax / overallMin : std::numeric_limits<double>::infinity();
  report.monotoneGrowth = report.spheres.size() >= 2;
  for (std::size_t i = 1; i < report.spheres.size(); ++i) {
    if (!(report.spheres[i].spread > report.spheres[i - 1].spread)) report.monotoneGrowth = false;
  }
  return report;
}

std::vector<std::size_t> conicalityScore(const GroupPresentation& p, const Vector& z, double r, int n, int workers) {
  const GroupPresentation lifted = liftPresentation(p);
  const ConvexDomain disk = ConvexDomain::kleinBall(2);
  std::vector<std::size_t> counts;
  BallOptions options;
  options.workers = workers;
  options.visitor = [&](int, std::size_t, std::span<const ElementStack> stacks) {
    std::vector<char> hit(stacks.size(), 0);
    parallelFor(stacks.size(), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const Vector point = kleinOrbitPoint(stacks[i].matrix());
        hit[i] = disk.contains(point) && shadowContains(disk, disk.basepoint(), point, r, z);
      }
    });
    counts.push_back(static_cast<std::size_t>(std::count(hit.begin(), hit.end(), 1)));
  };
  wordBall(lifted, n, options);
  return counts;
}

}  // namespace pslab
