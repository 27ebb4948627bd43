#include "pslab/cocycle.hpp"

#include "pslab/errors.hpp"

#include <cmath>

namespace pslab {

WeylVector iwasawa(const ElementStack& a, const Flag& f) {
  const int d = a.dim();
  if (f.dim() != d) throw Error(ErrorCode::ThetaMismatch, "dimension mismatch");
  const auto& idx = f.theta().indices();
  std::vector<double> omegas;
  omegas.reserve(idx.size());
  for (int k : idx) omegas.push_back(a.logWedgeGrowth(k, f.frame()));
  return WeylVector::fromOmegas(d, idx, omegas);
}

WeylVector iwasawa(const Matrix& a, const Flag& f) { return iwasawa(ElementStack::fromMatrix(a), f); }

WeylVector gromovProduct(const Flag& f, const Flag& g, double tolerance) {
  if (!(f.theta() == g.theta())) throw Error(ErrorCode::ThetaMismatch, "flags have different theta");
  const int d = f.dim();
  const auto& idx = f.theta().indices();
  std::vector<double> omegas;
  omegas.reserve(idx.size());
  for (int k : idx) {
    // The last k columns of G's frame are an orthonormal basis of the
    // annihilator of G^{d-k} (identified with vectors by the inner product).
    const Matrix pairing = g.frame().rightCols(k).transpose() * f.frame().leftCols(k);
    const double det = std::abs(pairing.determinant());
    if (!(det > tolerance)) {
      throw Error(ErrorCode::NotTransverse,
                  "k = " + std::to_string(k) + ", witness = " + std::to_string(det));
    }
    omegas.push_back(std::log(det));
  }
  return WeylVector::fromOmegas(d, idx, omegas);
}

WeylVector kappaTheta(const ElementStack& a, const ThetaSet& theta) { return projectTheta(a.kappa(), theta); }

WeylVector nuTheta(const ElementStack& a, const ThetaSet& theta) { return projectTheta(a.jordan(), theta); }

double phiIwasawa(const Functional& phi, const ElementStack& a, const Flag& f) {
  return evalFunctional(phi, iwasawa(a, f));
}

double phiGromov(const Functional& phi, const Flag& f, const Flag& g) {
  return evalFunctional(phi, gromovProduct(f, g));
}

double phiKappa(const Functional& phi, const ElementStack& a, const ThetaSet& theta) {
  return evalFunctional(phi, kappaTheta(a, theta));
}

double phiJordan(const Functional& phi, const ElementStack& a, const ThetaSet& theta) {
  return evalFunctional(phi, nuTheta(a, theta));
}

}  // namespace pslab
