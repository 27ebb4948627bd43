#pragma once

// Dense linear-algebra helpers shared by every module. Matrices are small
// (d <= ~20 including exterior powers) so dynamic Eigen types are used
// throughout.

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace pslab {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Default tolerance for the determinant check of SL(d,R) inputs.
inline constexpr double kUnimodularTolerance = 1e-6;

/// Returns A scaled by |det A|^{-1/d}. Throws NonUnimodular when
/// |det A - 1| exceeds `tolerance` or A is not square.
Matrix normalizeUnimodular(const Matrix& a, double tolerance = kUnimodularTolerance);

/// Singular values in decreasing order.
Vector singularValues(const Matrix& a);

/// Largest singular value, with a cancellation-free closed form for 2x2.
double largestSingularValue(const Matrix& a);

/// Moduli of the eigenvalues, sorted decreasingly (stable).
Vector eigenvalueModuli(const Matrix& a);

/// Largest eigenvalue modulus.
double spectralRadius(const Matrix& a);

/// Thin QR of the columns of `cols` with the positive-diagonal convention.
/// The returned matrix has orthonormal columns spanning the same space.
Matrix orthonormalColumns(const Matrix& cols);

/// Orthonormal basis of the orthogonal complement of span(cols) (d x (d-rank)).
Matrix orthogonalComplement(const Matrix& cols);

/// Top `k` left singular vectors of a.
Matrix leadingLeftSingularVectors(const Matrix& a, int k);

/// Binomial coefficient as an integer.
std::size_t binomial(int n, int k);

/// All k-subsets of {0..d-1} in lexicographic order.
std::vector<std::vector<int>> kSubsets(int d, int k);

/// k x k minors of the d x k matrix `v` in lexicographic subset order, i.e.
/// the coordinates of v_1 ^ ... ^ v_k in the standard wedge basis.
Vector pluckerCoordinates(const Matrix& v);

/// Orthonormal basis (d x k) of the subspace represented by a decomposable
/// k-vector in the lexicographic wedge basis of Lambda^k R^d.
Matrix subspaceFromPlucker(const Vector& wedge, int d, int k);

/// Entrywise maximum absolute difference.
double maxAbsDiff(const Matrix& a, const Matrix& b);

}  // namespace pslab
