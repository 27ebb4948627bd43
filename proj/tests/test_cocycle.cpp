#include "oracle.hpp"

#include "pslab/cocycle.hpp"
#include "pslab/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pslab;

namespace {

double gramLogVolume(const Matrix& m) { return 0.5 * std::log(oracle::det(m.transpose() * m)); }

}  // namespace

TEST_CASE("Iwasawa cocycle against Gram determinants") {
  std::mt19937_64 rng(31);
  for (int d = 2; d <= 5; ++d) {
    const ThetaSet th = ThetaSet::full(d);
    for (int t = 0; t < 10; ++t) {
      const Matrix a = oracle::randomSL(d, rng);
      const Matrix q = oracle::randomRotation(d, rng);
      const WeylVector b = iwasawa(a, Flag(th, q));
      for (int k = 1; k < d; ++k) CHECK(b.omega(k) == doctest::Approx(gramLogVolume(a * q.leftCols(k))));
      CHECK(b.sum() == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("Iwasawa cocycle of rotations and diagonal matrices") {
  const ThetaSet th = ThetaSet::full(3);
  std::mt19937_64 rng(1);
  const Matrix k = oracle::randomRotation(3, rng);
  CHECK(iwasawa(k, Flag::standard(th)).norm() < 1e-12);
  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << std::exp(1.0), 1.0, std::exp(-1.0);
  const WeylVector b = iwasawa(d, Flag::standard(th));
  CHECK(b.omega(1) == doctest::Approx(1.0));
  CHECK(b.omega(2) == doctest::Approx(1.0));
  const WeylVector c = iwasawa(d, Flag::opposite(th));
  CHECK(c.omega(1) == doctest::Approx(-1.0));
}

TEST_CASE("cocycle identity and the bound by kappa") {
  std::mt19937_64 rng(44);
  for (int d = 2; d <= 4; ++d) {
    const ThetaSet th = ThetaSet::full(d);
    for (int t = 0; t < 20; ++t) {
      const Matrix a = oracle::randomSL(d, rng);
      const Matrix b = oracle::randomSL(d, rng);
      const Flag f(th, oracle::randomRotation(d, rng));
      const WeylVector lhs = iwasawa(Matrix(a * b), f);
      const WeylVector rhs = iwasawa(a, actOnFlag(b, f)) + iwasawa(b, f);
      CHECK((lhs - rhs).norm() < 1e-9);
      const WeylVector k = kappa(a);
      const WeylVector ba = iwasawa(a, f);
      for (int j = 1; j < d; ++j) CHECK(ba.omega(j) <= k.omega(j) + 1e-9);
    }
  }
}

TEST_CASE("Gromov product examples") {
  const ThetaSet th(2, {1});
  CHECK(gromovProduct(Flag::standard(th), Flag::opposite(th)).norm() < 1e-14);
  Matrix r(2, 2);
  const double c = std::sqrt(0.5);
  r << c, -c, c, c;
  const WeylVector g = gromovProduct(Flag::standard(th), Flag(th, r));
  CHECK(g.omega(1) == doctest::Approx(-0.3466).epsilon(1e-4));
  try {
    gromovProduct(Flag::standard(th), Flag::standard(th));
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotTransverse);
  }
}

TEST_CASE("Gromov product is non-positive on the weights and transforms by the cocycle") {
  std::mt19937_64 rng(77);
  for (int d = 2; d <= 4; ++d) {
    const ThetaSet th = ThetaSet::full(d);
    for (int t = 0; t < 20; ++t) {
      const Flag f(th, oracle::randomRotation(d, rng));
      const Flag g(th, oracle::randomRotation(d, rng));
      const Matrix a = oracle::randomSL(d, rng);
      const WeylVector gp = gromovProduct(f, g);
      for (int k = 1; k < d; ++k) CHECK(gp.omega(k) <= 1e-12);
      const WeylVector lhs = gromovProduct(actOnFlag(a, f), actOnFlag(a, g)) - gp;
      const WeylVector rhs = -iwasawa(a, f) + hatIota(iwasawa(a, g));
      CHECK((lhs - rhs).norm() < 1e-8);
    }
  }
}

TEST_CASE("alpha_1 of the symmetric square is the hyperbolic displacement") {
  std::mt19937_64 rng(13);
  for (int t = 0; t < 50; ++t) {
    const Matrix b = oracle::randomSL(2, rng);
    const double ref = oracle::hyperbolicDisplacement(b);
    CHECK(kappa(symmetricPowerRep(b, 3)).alpha(1) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(kappa(b).alpha(1) == doctest::Approx(ref).epsilon(1e-9));
  }
}

TEST_CASE("phi of kappa under inversion uses the opposition involution") {
  std::mt19937_64 rng(19);
  const ThetaSet th(4, {1, 3});
  const Functional phi(4, {{1, 1.0}, {3, 0.25}});
  for (int t = 0; t < 10; ++t) {
    const ElementStack a = ElementStack::fromMatrix(oracle::randomSL(4, rng));
    const ElementStack ai = ElementStack::fromMatrix(a.inverse());
    CHECK(phiKappa(phi, a, th) == doctest::Approx(phiKappa(iotaStar(phi, th), ai, th)).epsilon(1e-9));
  }
}
