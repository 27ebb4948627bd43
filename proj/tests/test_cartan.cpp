#include "oracle.hpp"

#include "pslab/cartan.hpp"
#include "pslab/errors.hpp"

#include <doctest.h>

#include <random>

using namespace pslab;

TEST_CASE("weights and roots of a Cartan vector") {
  WeylVector v{3.0, 1.0, 0.0, -4.0};
  CHECK(v.omega(1) == doctest::Approx(3.0));
  CHECK(v.omega(2) == doctest::Approx(4.0));
  CHECK(v.omega(3) == doctest::Approx(4.0));
  CHECK(v.alpha(1) == doctest::Approx(2.0));
  CHECK(v.alpha(2) == doctest::Approx(1.0));
  CHECK(v.alpha(3) == doctest::Approx(4.0));
  CHECK(v.isDominant());
  CHECK_FALSE(WeylVector{0.0, 1.0, -1.0}.isDominant());
}

TEST_CASE("projection onto a_theta averages the unconstrained block") {
  const WeylVector v{3.0, 1.0, 0.0, -4.0};
  const WeylVector p = projectTheta(v, ThetaSet(4, {1, 3}));
  CHECK(p[0] == doctest::Approx(3.0));
  CHECK(p[1] == doctest::Approx(0.5));
  CHECK(p[2] == doctest::Approx(0.5));
  CHECK(p[3] == doctest::Approx(-4.0));
  CHECK(p.omega(1) == doctest::Approx(v.omega(1)));
  CHECK(p.omega(3) == doctest::Approx(v.omega(3)));
  CHECK(p.alpha(2) == doctest::Approx(0.0));

  const WeylVector q = projectTheta(v, ThetaSet::full(4));
  CHECK((q.entries() - v.entries()).norm() < 1e-15);
}

TEST_CASE("fromOmegas inverts the weights on a_theta") {
  const WeylVector v = WeylVector::fromOmegas(5, {1, 2, 3, 4}, {2.0, 3.0, 3.5, 2.0});
  CHECK(v.sum() == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(v.omega(1) == doctest::Approx(2.0));
  CHECK(v.omega(2) == doctest::Approx(3.0));
  CHECK(v.omega(3) == doctest::Approx(3.5));
  CHECK(v.omega(4) == doctest::Approx(2.0));

  const WeylVector w = WeylVector::fromOmegas(4, {1, 3}, {3.0, 4.0});
  CHECK(w.alpha(2) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(w[0] == doctest::Approx(3.0));
  CHECK(w[3] == doctest::Approx(-4.0));
}

TEST_CASE("theta sets must be symmetric and in range") {
  CHECK_NOTHROW(ThetaSet(5, {2, 3}));
  try {
    ThetaSet(4, {1, 2});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::AsymmetricTheta);
  }
  try {
    ThetaSet(3, {0, 3});
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadIndex);
  }
  CHECK(ThetaSet::full(4).indices() == std::vector<int>{1, 2, 3});
}

TEST_CASE("functionals expand alpha_k in the weights") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 1; k <= 4; ++k) {
    const Functional a = Functional::alpha(k, 5);
    Vector e(5);
    for (int i = 0; i < 5; ++i) e(i) = g(rng);
    e.array() -= e.mean();
    const WeylVector v(e);
    CHECK(evalFunctional(a, v) == doctest::Approx(v.alpha(k)));
  }
  const Functional phi(4, {{1, 1.0}, {3, 2.0}});
  CHECK(phi.supportedIn(ThetaSet(4, {1, 3})));
  CHECK_FALSE(phi.supportedIn(ThetaSet(4, {2})));
  CHECK(iotaStar(phi).coefficients() == std::map<int, double>{{1, 2.0}, {3, 1.0}});
  CHECK_THROWS_AS(iotaStar(phi, ThetaSet(4, {2})), Error);
}

TEST_CASE("Cartan projection of small matrices") {
  Matrix a(2, 2);
  a << 2.0, 1.0, 0.0, 0.5;
  const WeylVector k = kappa(a);
  const oracle::Vec ref = oracle::logSingular(a);
  CHECK(k[0] == doctest::Approx(ref(0)).epsilon(1e-12));
  CHECK(k[1] == doctest::Approx(ref(1)).epsilon(1e-12));
  CHECK(k[0] == doctest::Approx(0.8099).epsilon(1e-4));

  Matrix d = Matrix::Zero(3, 3);
  d.diagonal() << 0.25, 4.0, 1.0;
  const WeylVector kd = kappa(d);
  CHECK(kd[0] == doctest::Approx(std::log(4.0)));
  CHECK(kd[1] == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(kd[2] == doctest::Approx(std::log(0.25)));

  CHECK(kappa(Matrix::Identity(4, 4)).norm() < 1e-14);
}

TEST_CASE("Cartan and Jordan projections agree with eigen-solver references") {
  std::mt19937_64 rng(11);
  for (int d = 2; d <= 5; ++d)
    for (int trial = 0; trial < 20; ++trial) {
      const Matrix a = oracle::randomSL(d, rng);
      const oracle::Vec ks = oracle::logSingular(a);
      const oracle::Vec ev = oracle::logEigenModuli(a);
      const WeylVector k = kappa(a);
      const WeylVector n = jordan(a);
      CHECK((k.entries() - ks).cwiseAbs().maxCoeff() < 1e-9);
      CHECK((n.entries() - ev).cwiseAbs().maxCoeff() < 1e-9);
      CHECK(k.isDominant(1e-12));
      CHECK(k.sum() == doctest::Approx(0.0).epsilon(1e-10));
    }
}

TEST_CASE("opposition involution reverses coordinates") {
  const WeylVector v{2.0, 0.5, -2.5};
  const WeylVector r = hatIota(v);
  CHECK(r[0] == -2.5);
  CHECK(r[2] == 2.0);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Matrix a = oracle::randomSL(4, rng);
    const WeylVector ki = kappa(a.inverse());
    CHECK((ki.entries() + hatIota(kappa(a)).entries()).cwiseAbs().maxCoeff() < 1e-9);
  }
}
