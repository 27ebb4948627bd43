#include "pslab/flags.hpp"

#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <optional>

namespace pslab {

Flag::Flag(ThetaSet theta, Matrix frame) : theta_(std::move(theta)), frame_(std::move(frame)) {
  const auto d = frame_.rows();
  if (frame_.cols() != d || d != theta_.dimension()) {
    throw Error(ErrorCode::ThetaMismatch, "frame size does not match theta dimension");
  }
  if ((frame_.transpose() * frame_ - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-8) {
    throw Error(ErrorCode::InvalidArgument, "flag frame is not orthogonal");
  }
}

Flag Flag::standard(const ThetaSet& theta) {
  const int d = theta.dimension();
  return Flag(theta, Matrix::Identity(d, d));
}

Flag Flag::opposite(const ThetaSet& theta) {
  const int d = theta.dimension();
  Matrix q = Matrix::Zero(d, d);
  for (int j = 0; j < d; ++j) q(d - 1 - j, j) = 1.0;
  return Flag(theta, q);
}

Matrix Flag::projector(int k) const {
  const Matrix b = subspace(k);
  return b * b.transpose();
}

bool Flag::sameAs(const Flag& o, double tolerance) const {
  if (!(theta_ == o.theta_)) return false;
  return flagDistance(*this, o) < tolerance;
}

Flag assembleFlag(const ThetaSet& theta, int d, const std::vector<Matrix>& bases) {
  const auto& idx = theta.indices();
  if (bases.size() != idx.size()) throw Error(ErrorCode::ThetaMismatch, "one basis per theta index required");
  Matrix columns(d, 0);
  int have = 0;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    const int k = idx[i];
    const Matrix& b = bases[i];
    const Matrix residual = b - columns * (columns.transpose() * b);
    const Matrix added = leadingLeftSingularVectors(residual, k - have);
    Matrix next(d, k);
    next << columns, added;
    columns = next;
    have = k;
  }
  Matrix frame(d, d);
  frame << columns, orthogonalComplement(columns);
  return Flag(theta, orthonormalColumns(frame));
}

namespace {

Matrix basisFromHalf(const ElementStack& s, int k, const Matrix& half) {
  return s.usesDual(k) ? orthogonalComplement(half) : half;
}

}  // namespace

Flag uTheta(const ElementStack& a, const ThetaSet& theta, double gapTolerance) {
  const int d = a.dim();
  if (theta.dimension() != d) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  const WeylVector k = a.kappa();
  for (int i : theta.indices()) {
    const double gap = k.alpha(i);
    if (!(gap > gapTolerance)) throw InsufficientGapError(i, gap);
  }
  std::vector<Matrix> bases;
  for (int i : theta.indices()) bases.push_back(basisFromHalf(a, i, a.leadingSubspace(i)));
  return assembleFlag(theta, d, bases);
}

Flag uTheta(const Matrix& a, const ThetaSet& theta, double gapTolerance) {
  return uTheta(ElementStack::fromMatrix(a), theta, gapTolerance);
}

Flag actOnFlag(const ElementStack& a, const Flag& f) {
  const int d = a.dim();
  if (f.dim() != d) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  std::vector<Matrix> bases;
  for (int i : f.theta().indices()) bases.push_back(basisFromHalf(a, i, a.transportedSubspace(i, f.frame())));
  return assembleFlag(f.theta(), d, bases);
}

Flag actOnFlag(const Matrix& a, const Flag& f) { return actOnFlag(ElementStack::fromMatrix(a), f); }

Transversality isTransverse(const Flag& f, const Flag& g, double tolerance) {
  if (!(f.theta() == g.theta())) throw Error(ErrorCode::ThetaMismatch, "flags have different theta");
  Transversality out;
  out.witness = std::numeric_limits<double>::infinity();
  for (int k : f.theta().indices()) {
    // |det[F^k | G^{d-k}]| for orthonormal bases equals |det| of F^k projected
    // onto (G^{d-k})^perp, which is spanned by the last k columns of G's frame.
    const Matrix m = g.frame().rightCols(k).transpose() * f.frame().leftCols(k);
    const double w = std::abs(m.determinant());
    if (w < out.witness) {
      out.witness = w;
      out.worstIndex = k;
    }
  }
  out.transverse = out.witness > tolerance;
  return out;
}

double flagDistance(const Flag& f, const Flag& g) {
  if (!(f.theta() == g.theta())) throw Error(ErrorCode::ThetaMismatch, "flags have different theta");
  const int d = f.dim();
  double out = 0.0;
  for (int k : f.theta().indices()) {
    const Matrix m = g.frame().rightCols(d - k).transpose() * f.frame().leftCols(k);
    out = std::max(out, std::min(1.0, largestSingularValue(m)));
  }
  return out;
}

LimitSetSample sampleLimitSet(const GroupPresentation& p, const ThetaSet& theta, int n, int workers,
                              double gapTolerance) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sphere radius must be at least 1");
  if (theta.dimension() != p.dimension()) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  std::vector<std::optional<Flag>> flags;
  std::size_t offset = 0;
  BallOptions options;
  options.workers = workers;
  options.visitor = [&](int sphere, std::size_t start, std::span<const ElementStack> stacks) {
    if (sphere != n) return;
    offset = start;
    flags.assign(stacks.size(), std::nullopt);
    parallelFor(stacks.size(), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          flags[i] = uTheta(stacks[i], theta, gapTolerance);
        } catch (const InsufficientGapError&) {
          flags[i].reset();
        }
      }
    });
  };
  const WordBall ball = wordBall(p, n, options);
  LimitSetSample out;
  for (std::size_t i = 0; i < flags.size(); ++i) {
    if (flags[i]) {
      out.points.push_back({*flags[i], ball.word(offset + i)});
    } else {
      ++out.skipped;
    }
  }
  return out;
}

namespace {

// Orthonormal basis of the sum of generalized eigenspaces for the k eigenvalues
// of largest modulus, as the range of prod over the remaining eigenvalues of
// (A - lambda). Conjugate pairs enter as real quadratic factors.
Matrix dominantEigenspace(const Matrix& a, int k) {
  const auto d = a.rows();
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::DecompositionFailure, "eigenvalue iteration did not converge");
  }
  std::vector<std::complex<double>> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + d);
  std::stable_sort(ev.begin(), ev.end(), [](const auto& x, const auto& y) { return std::abs(x) > std::abs(y); });
  const double scale = std::max(1.0, a.norm());
  const Matrix id = Matrix::Identity(d, d);
  Matrix p = id;
  for (std::size_t j = static_cast<std::size_t>(k); j < ev.size(); ++j) {
    const auto lambda = ev[j];
    if (lambda.imag() < 0.0) continue;
    if (lambda.imag() > 0.0) {
      const Matrix factor = (a * a - 2.0 * lambda.real() * a + std::norm(lambda) * id) / (scale * scale);
      p = factor * p;
    } else {
      p = ((a - lambda.real() * id) / scale) * p;
    }
    p /= std::max(p.norm(), std::numeric_limits<double>::min());
  }
  return leadingLeftSingularVectors(p, k);
}

}  // namespace

Flag attractingFixedFlag(const Matrix& a, const ThetaSet& theta, double gapTolerance) {
  const Matrix m = normalizeUnimodular(a);
  const int d = static_cast<int>(m.rows());
  if (theta.dimension() != d) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  const WeylVector nu = jordan(m);
  for (int k : theta.indices()) {
    const double gap = nu.alpha(k);
    if (!(gap > gapTolerance)) {
      throw Error(ErrorCode::NotProximal, "alpha_" + std::to_string(k) + "(nu) = " + std::to_string(gap));
    }
  }
  const Matrix invT = m.fullPivLu().inverse().transpose();
  std::vector<Matrix> bases;
  for (int k : theta.indices()) {
    if (k > d / 2) {
      // The complement of the top-k eigenspace of A is the top-(d-k)
      // eigenspace of A^{-T}.
      bases.push_back(orthogonalComplement(dominantEigenspace(invT, d - k)));
    } else {
      bases.push_back(dominantEigenspace(m, k));
    }
  }
  return assembleFlag(theta, d, bases);
}

double directedHausdorff(const std::vector<Flag>& a, const std::vector<Flag>& b, int workers) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  std::vector<double> nearest(a.size());
  parallelFor(a.size(), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& y : b) best = std::min(best, flagDistance(a[i], y));
      nearest[i] = best;
    }
  });
  return *std::max_element(nearest.begin(), nearest.end());
}

double hausdorffDistance(const std::vector<Flag>& a, const std::vector<Flag>& b, int workers) {
  return std::max(directedHausdorff(a, b, workers), directedHausdorff(b, a, workers));
}

}  // namespace pslab
