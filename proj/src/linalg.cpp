#include "pslab/linalg.hpp"

#include "pslab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace pslab {

Matrix normalizeUnimodular(const Matrix& a, double tolerance) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::NonUnimodular, "matrix is not square");
  }
  const double det = a.determinant();
  if (!std::isfinite(det) || std::abs(det - 1.0) > tolerance) {
    throw Error(ErrorCode::NonUnimodular, "det = " + std::to_string(det));
  }
  return a * std::pow(std::abs(det), -1.0 / static_cast<double>(a.rows()));
}

Vector singularValues(const Matrix& a) {
  Eigen::JacobiSVD<Matrix> svd(a);
  Vector s = svd.singularValues();
  if (!s.allFinite()) {
    throw Error(ErrorCode::DecompositionFailure, "non-finite singular values");
  }
  return s;
}

double largestSingularValue(const Matrix& a) {
  if (a.rows() == 2 && a.cols() == 2) {
    const double p = a(0, 0), q = a(0, 1), r = a(1, 0), s = a(1, 1);
    const double value = 0.5 * (std::hypot(p + s, r - q) + std::hypot(p - s, q + r));
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::DecompositionFailure, "non-finite singular value");
    }
    return value;
  }
  return singularValues(a)(0);
}

namespace {

// Diagonal similarity by powers of two equalizing row and column norms
// (Parlett-Reinsch). Exact in floating point and leaves eigenvalues alone.
Matrix balanced(Matrix a) {
  const auto n = a.rows();
  bool changed = true;
  for (int sweep = 0; changed && sweep < 100; ++sweep) {
    changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      double c = 0.0, r = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (j == i) continue;
        c += std::abs(a(j, i));
        r += std::abs(a(i, j));
      }
      if (c == 0.0 || r == 0.0) continue;
      double f = 1.0;
      const double s = c + r;
      while (c < r / 2.0) {
        c *= 2.0;
        r /= 2.0;
        f *= 2.0;
      }
      while (c >= r * 2.0) {
        c /= 2.0;
        r *= 2.0;
        f /= 2.0;
      }
      if ((c + r) < 0.95 * s) {
        changed = true;
        a.row(i) /= f;
        a.col(i) *= f;
      }
    }
  }
  return a;
}

}  // namespace

Vector eigenvalueModuli(const Matrix& a) {
  const auto n = a.rows();
  Vector moduli(n);
  if (n == 2) {
    const double tr = a(0, 0) + a(1, 1);
    const double det = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) {
      // Larger root without cancellation, the other from the determinant.
      const double big = 0.5 * (std::abs(tr) + std::sqrt(disc));
      moduli << big, (big == 0.0 ? 0.0 : std::abs(det) / big);
    } else {
      const double m = std::sqrt(std::abs(det));
      moduli << m, m;
    }
  } else {
    Eigen::EigenSolver<Matrix> solver(balanced(a), false);
    if (solver.info() != Eigen::Success) {
      throw Error(ErrorCode::DecompositionFailure, "eigenvalue iteration did not converge");
    }
    moduli = solver.eigenvalues().cwiseAbs();
  }
  std::vector<double> sorted(moduli.data(), moduli.data() + n);
  std::stable_sort(sorted.begin(), sorted.end(), std::greater<>());
  for (Eigen::Index i = 0; i < n; ++i) moduli(i) = sorted[static_cast<std::size_t>(i)];
  if (!moduli.allFinite()) {
    throw Error(ErrorCode::DecompositionFailure, "non-finite eigenvalues");
  }
  return moduli;
}

double spectralRadius(const Matrix& a) { return eigenvalueModuli(a)(0); }

Matrix orthonormalColumns(const Matrix& cols) {
  Eigen::HouseholderQR<Matrix> qr(cols);
  Matrix q = qr.householderQ() * Matrix::Identity(cols.rows(), cols.cols());
  const Matrix r = qr.matrixQR().topRows(cols.cols()).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols.cols(); ++j) {
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

Matrix orthogonalComplement(const Matrix& cols) {
  const auto d = cols.rows();
  if (cols.cols() == 0) return Matrix::Identity(d, d);
  Eigen::JacobiSVD<Matrix> svd(cols, Eigen::ComputeFullU);
  const auto rank = std::min<Eigen::Index>(cols.cols(), d);
  return svd.matrixU().rightCols(d - rank);
}

Matrix leadingLeftSingularVectors(const Matrix& a, int k) {
  Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU);
  return svd.matrixU().leftCols(k);
}

std::size_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t result = 1;
  for (int i = 1; i <= k; ++i) {
    result = result * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  }
  return result;
}

std::vector<std::vector<int>> kSubsets(int d, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > d) return out;
  std::vector<int> current(static_cast<std::size_t>(k));
  std::iota(current.begin(), current.end(), 0);
  while (true) {
    out.push_back(current);
    int i = k - 1;
    while (i >= 0 && current[static_cast<std::size_t>(i)] == d - k + i) --i;
    if (i < 0) break;
    ++current[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) {
      current[static_cast<std::size_t>(j)] = current[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
  return out;
}

Vector pluckerCoordinates(const Matrix& v) {
  const int d = static_cast<int>(v.rows());
  const int k = static_cast<int>(v.cols());
  const auto subsets = kSubsets(d, k);
  Vector out(static_cast<Eigen::Index>(subsets.size()));
  Matrix minor(k, k);
  for (std::size_t s = 0; s < subsets.size(); ++s) {
    for (int i = 0; i < k; ++i) minor.row(i) = v.row(subsets[s][static_cast<std::size_t>(i)]);
    out(static_cast<Eigen::Index>(s)) = k == 1 ? minor(0, 0) : minor.determinant();
  }
  return out;
}

Matrix subspaceFromPlucker(const Vector& wedge, int d, int k) {
  if (k == 1) return wedge.normalized();
  const auto subsets = kSubsets(d, k);
  const auto smaller = kSubsets(d, k - 1);
  // Lookup from a sorted k-subset to its wedge-basis index.
  auto indexOf = [&](const std::vector<int>& subset) {
    auto it = std::lower_bound(subsets.begin(), subsets.end(), subset);
    return static_cast<Eigen::Index>(it - subsets.begin());
  };
  Matrix contractions = Matrix::Zero(d, static_cast<Eigen::Index>(smaller.size()));
  std::vector<int> merged;
  for (std::size_t s = 0; s < smaller.size(); ++s) {
    const auto& base = smaller[s];
    for (int i = 0; i < d; ++i) {
      if (std::find(base.begin(), base.end(), i) != base.end()) continue;
      merged = base;
      merged.insert(std::upper_bound(merged.begin(), merged.end(), i), i);
      const auto above = std::count_if(base.begin(), base.end(), [i](int b) { return b > i; });
      const double sign = (above % 2 == 0) ? 1.0 : -1.0;
      contractions(i, static_cast<Eigen::Index>(s)) = sign * wedge(indexOf(merged));
    }
  }
  return leadingLeftSingularVectors(contractions, k);
}

double maxAbsDiff(const Matrix& a, const Matrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace pslab
