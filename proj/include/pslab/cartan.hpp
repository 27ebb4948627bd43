#pragma once

// The Cartan subspace of sl(d,R): zero-sum vectors, simple roots, fundamental
// weights, the projections p_theta, and the Cartan/Jordan projections.

#include "pslab/linalg.hpp"

#include <initializer_list>
#include <map>
#include <vector>

namespace pslab {

/// An element of the Cartan subspace: a length-d vector whose entries sum to
/// zero. Houses kappa, nu, Iwasawa and Gromov values.
class WeylVector {
 public:
  WeylVector() = default;
  explicit WeylVector(Vector entries) : entries_(std::move(entries)) {}
  WeylVector(std::initializer_list<double> values);

  /// Zero vector of dimension d.
  static WeylVector zero(int d) { return WeylVector(Vector::Zero(d)); }

  /// Builds the unique vector of a_theta whose omega_k values are prescribed
  /// for k in `indices` (with alpha_k = 0 for the remaining k).
  static WeylVector fromOmegas(int d, const std::vector<int>& indices,
                               const std::vector<double>& omegaValues);

  int dim() const { return static_cast<int>(entries_.size()); }
  const Vector& entries() const { return entries_; }
  double operator[](int i) const { return entries_(i); }

  /// omega_k(v) = v_1 + ... + v_k, k in 1..d-1 (1-based as in the weights).
  double omega(int k) const;
  /// alpha_k(v) = v_k - v_{k+1}.
  double alpha(int k) const;
  double sum() const { return entries_.sum(); }
  double norm() const { return entries_.norm(); }
  bool isDominant(double tolerance = 0.0) const;

  WeylVector operator+(const WeylVector& o) const { return WeylVector(entries_ + o.entries_); }
  WeylVector operator-(const WeylVector& o) const { return WeylVector(entries_ - o.entries_); }
  WeylVector operator-() const { return WeylVector(-entries_); }
  WeylVector operator*(double c) const { return WeylVector(entries_ * c); }

 private:
  Vector entries_;
};

/// Symmetric non-empty subset of {1, ..., d-1}.
class ThetaSet {
 public:
  ThetaSet(int d, std::vector<int> indices);
  static ThetaSet full(int d);

  int dimension() const { return d_; }
  const std::vector<int>& indices() const { return indices_; }
  bool contains(int k) const;
  int maxIndex() const { return indices_.back(); }
  bool operator==(const ThetaSet& o) const { return d_ == o.d_ && indices_ == o.indices_; }

 private:
  int d_;
  std::vector<int> indices_;
};

/// A linear functional sum_k c_k * omega_k on a (restricted to a_theta when
/// its support lies in theta).
class Functional {
 public:
  Functional() = default;
  Functional(int d, std::map<int, double> coefficients);

  static Functional omega(int k, int d);
  /// alpha_k = 2 omega_k - omega_{k-1} - omega_{k+1} on the full Cartan subspace.
  static Functional alpha(int k, int d);

  int dimension() const { return d_; }
  const std::map<int, double>& coefficients() const { return coefficients_; }
  std::vector<int> support() const;
  bool supportedIn(const ThetaSet& theta) const;

  /// The functional phi o p_theta written in the omega_k, k in theta basis,
  /// i.e. the restriction of phi to a_theta.
  Functional restrictedTo(const ThetaSet& theta) const;

  Functional operator+(const Functional& o) const;
  Functional operator*(double c) const;
  bool operator==(const Functional& o) const { return d_ == o.d_ && coefficients_ == o.coefficients_; }

 private:
  int d_ = 0;
  std::map<int, double> coefficients_;
};

/// Cartan projection: logs of singular values, decreasing.
WeylVector kappa(const Matrix& a);

/// Jordan projection: logs of eigenvalue moduli, decreasing.
WeylVector jordan(const Matrix& a);

/// p_theta: omega_k preserved for k in theta, alpha_k killed otherwise.
WeylVector projectTheta(const WeylVector& v, const ThetaSet& theta);

double evalFunctional(const Functional& phi, const WeylVector& v);

/// Coordinate reversal (a_1, ..., a_d) -> (a_d, ..., a_1).
WeylVector hatIota(const WeylVector& v);

/// The involution with phi(kappa(A)) = iota(phi)(kappa(A^{-1})): c_k -> c_{d-k}.
Functional iotaStar(const Functional& phi);
/// As above, additionally checking support(phi) lies in the symmetric theta.
Functional iotaStar(const Functional& phi, const ThetaSet& theta);

}  // namespace pslab
