#include "pslab/cartan.hpp"

#include "pslab/errors.hpp"

#include <algorithm>
#include <cmath>

namespace pslab {

WeylVector::WeylVector(std::initializer_list<double> values) : entries_(static_cast<Eigen::Index>(values.size())) {
  Eigen::Index i = 0;
  for (double v : values) entries_(i++) = v;
}

WeylVector WeylVector::fromOmegas(int d, const std::vector<int>& indices,
                                  const std::vector<double>& omegaValues) {
  // omega values are piecewise linear between consecutive prescribed indices
  // (alpha_k = 0 off the prescribed set), with omega_0 = omega_d = 0.
  std::vector<int> knots{0};
  std::vector<double> values{0.0};
  for (std::size_t i = 0; i < indices.size(); ++i) {
    knots.push_back(indices[i]);
    values.push_back(omegaValues[i]);
  }
  knots.push_back(d);
  values.push_back(0.0);
  std::vector<double> omegas(static_cast<std::size_t>(d) + 1, 0.0);
  for (std::size_t s = 0; s + 1 < knots.size(); ++s) {
    const int lo = knots[s], hi = knots[s + 1];
    for (int k = lo; k <= hi; ++k) {
      const double t = hi == lo ? 0.0 : static_cast<double>(k - lo) / (hi - lo);
      omegas[static_cast<std::size_t>(k)] = (1.0 - t) * values[s] + t * values[s + 1];
    }
  }
  Vector entries(d);
  for (int i = 0; i < d; ++i) {
    entries(i) = omegas[static_cast<std::size_t>(i) + 1] - omegas[static_cast<std::size_t>(i)];
  }
  return WeylVector(entries);
}

double WeylVector::omega(int k) const {
  if (k < 0 || k > dim()) throw Error(ErrorCode::BadIndex, "omega index " + std::to_string(k));
  return entries_.head(k).sum();
}

double WeylVector::alpha(int k) const {
  if (k < 1 || k >= dim()) throw Error(ErrorCode::BadIndex, "alpha index " + std::to_string(k));
  return entries_(k - 1) - entries_(k);
}

bool WeylVector::isDominant(double tolerance) const {
  for (int k = 1; k < dim(); ++k) {
    if (alpha(k) < -tolerance) return false;
  }
  return true;
}

ThetaSet::ThetaSet(int d, std::vector<int> indices) : d_(d), indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
  if (d < 2) throw Error(ErrorCode::BadIndex, "dimension must be at least 2");
  if (indices_.empty()) throw Error(ErrorCode::AsymmetricTheta, "theta is empty");
  for (int k : indices_) {
    if (k < 1 || k >= d) throw Error(ErrorCode::BadIndex, "theta index " + std::to_string(k));
    if (!std::binary_search(indices_.begin(), indices_.end(), d - k)) {
      throw Error(ErrorCode::AsymmetricTheta,
                  std::to_string(k) + " in theta but " + std::to_string(d - k) + " is not");
    }
  }
}

ThetaSet ThetaSet::full(int d) {
  std::vector<int> all;
  for (int k = 1; k < d; ++k) all.push_back(k);
  return ThetaSet(d, all);
}

bool ThetaSet::contains(int k) const { return std::binary_search(indices_.begin(), indices_.end(), k); }

Functional::Functional(int d, std::map<int, double> coefficients)
    : d_(d), coefficients_(std::move(coefficients)) {
  for (auto it = coefficients_.begin(); it != coefficients_.end();) {
    if (it->first < 1 || it->first >= d) {
      throw Error(ErrorCode::BadIndex, "functional index " + std::to_string(it->first));
    }
    it = it->second == 0.0 ? coefficients_.erase(it) : std::next(it);
  }
}

Functional Functional::omega(int k, int d) { return Functional(d, {{k, 1.0}}); }

Functional Functional::alpha(int k, int d) {
  if (k < 1 || k >= d) throw Error(ErrorCode::BadIndex, "alpha index " + std::to_string(k));
  std::map<int, double> c{{k, 2.0}};
  if (k - 1 >= 1) c[k - 1] = -1.0;
  if (k + 1 <= d - 1) c[k + 1] = -1.0;
  return Functional(d, c);
}

std::vector<int> Functional::support() const {
  std::vector<int> s;
  for (const auto& [k, c] : coefficients_) s.push_back(k);
  return s;
}

bool Functional::supportedIn(const ThetaSet& theta) const {
  return std::all_of(coefficients_.begin(), coefficients_.end(),
                     [&](const auto& kc) { return theta.contains(kc.first); });
}

Functional Functional::restrictedTo(const ThetaSet& theta) const {
  if (supportedIn(theta)) return *this;
  // Coefficient on omega_j equals phi evaluated on the a_theta basis vector
  // dual to {omega_k : k in theta}.
  std::map<int, double> c;
  const auto& idx = theta.indices();
  for (std::size_t j = 0; j < idx.size(); ++j) {
    std::vector<double> omegas(idx.size(), 0.0);
    omegas[j] = 1.0;
    const WeylVector basis = WeylVector::fromOmegas(d_, idx, omegas);
    c[idx[j]] = evalFunctional(*this, basis);
  }
  return Functional(d_, c);
}

Functional Functional::operator+(const Functional& o) const {
  std::map<int, double> c = coefficients_;
  for (const auto& [k, v] : o.coefficients_) c[k] += v;
  return Functional(std::max(d_, o.d_), c);
}

Functional Functional::operator*(double s) const {
  std::map<int, double> c;
  for (const auto& [k, v] : coefficients_) c[k] = s * v;
  return Functional(d_, c);
}

WeylVector kappa(const Matrix& a) {
  const Matrix m = normalizeUnimodular(a);
  const Vector s = singularValues(m);
  Vector out(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    if (s(i) <= 0.0) throw Error(ErrorCode::DecompositionFailure, "zero singular value");
    out(i) = std::log(s(i));
  }
  if (out.size() == 2) out(1) = -out(0);
  return WeylVector(out);
}

WeylVector jordan(const Matrix& a) {
  const Matrix m = normalizeUnimodular(a);
  const Vector moduli = eigenvalueModuli(m);
  Vector out(moduli.size());
  for (Eigen::Index i = 0; i < moduli.size(); ++i) {
    if (moduli(i) <= 0.0) throw Error(ErrorCode::DecompositionFailure, "zero eigenvalue");
    out(i) = std::log(moduli(i));
  }
  if (out.size() == 2) out(1) = -out(0);
  return WeylVector(out);
}

WeylVector projectTheta(const WeylVector& v, const ThetaSet& theta) {
  const int d = v.dim();
  if (theta.dimension() != d) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  // Rows: omega_k(p) = omega_k(v) for k in theta, alpha_k(p) = 0 otherwise,
  // and sum(p) = 0.
  Matrix system = Matrix::Zero(d, d);
  Vector rhs = Vector::Zero(d);
  for (int k = 1; k < d; ++k) {
    if (theta.contains(k)) {
      system.row(k - 1).head(k).setOnes();
      rhs(k - 1) = v.omega(k);
    } else {
      system(k - 1, k - 1) = 1.0;
      system(k - 1, k) = -1.0;
    }
  }
  system.row(d - 1).setOnes();
  Eigen::FullPivLU<Matrix> lu(system);
  if (lu.rank() < d) throw Error(ErrorCode::SingularSystem, "projection system is singular");
  return WeylVector(lu.solve(rhs));
}

double evalFunctional(const Functional& phi, const WeylVector& v) {
  double total = 0.0;
  for (const auto& [k, c] : phi.coefficients()) total += c * v.omega(k);
  return total;
}

WeylVector hatIota(const WeylVector& v) { return WeylVector(v.entries().reverse()); }

Functional iotaStar(const Functional& phi) {
  const int d = phi.dimension();
  std::map<int, double> c;
  for (const auto& [k, v] : phi.coefficients()) c[d - k] = v;
  return Functional(d, c);
}

Functional iotaStar(const Functional& phi, const ThetaSet& theta) {
  if (!phi.supportedIn(theta)) {
    throw Error(ErrorCode::AsymmetricTheta, "functional support is not contained in theta");
  }
  return iotaStar(phi);
}

}  // namespace pslab
