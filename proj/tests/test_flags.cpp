#include "oracle.hpp"

#include "pslab/errors.hpp"
#include "pslab/flags.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pslab;

namespace {

Matrix diag(std::initializer_list<double> v) {
  Vector e(static_cast<Eigen::Index>(v.size()));
  int i = 0;
  for (double x : v) e(i++) = x;
  return e.asDiagonal();
}

}  // namespace

TEST_CASE("Cartan limit flag of diagonal and conjugated matrices") {
  const ThetaSet full = ThetaSet::full(3);
  const Flag f = uTheta(diag({4.0, 1.0, 0.25}), full);
  CHECK(f.sameAs(Flag::standard(full)));

  // singular directions come out permuted to decreasing order
  const Flag g = uTheta(diag({0.25, 4.0, 1.0}), full);
  Matrix perm = Matrix::Zero(3, 3);
  perm(1, 0) = perm(2, 1) = perm(0, 2) = 1.0;
  CHECK(g.sameAs(Flag(full, perm)));

  std::mt19937_64 rng(2);
  const Matrix q = oracle::randomRotation(3, rng);
  const Flag h = uTheta(Matrix(q * diag({4.0, 1.0, 0.25})), full);
  CHECK(h.sameAs(Flag(full, q)));
}

TEST_CASE("missing gaps are reported with the failing root") {
  try {
    uTheta(diag({2.0, 2.0, 0.25}), ThetaSet::full(3));
    FAIL("no throw");
  } catch (const InsufficientGapError& e) {
    CHECK(e.root() == 1);
    CHECK(e.code() == ErrorCode::InsufficientGap);
  }
  // theta = {1, 2} in d = 3 needs both gaps, but {2, 2} in d = 4 only the middle one
  CHECK_NOTHROW(uTheta(diag({2.0, 2.0, 0.5, 0.5}), ThetaSet(4, {2})));
}

TEST_CASE("equivariance of U_theta under rotations") {
  std::mt19937_64 rng(9);
  for (int d = 3; d <= 4; ++d)
    for (int t = 0; t < 10; ++t) {
      const Matrix a = oracle::randomSL(d, rng);
      const Matrix k = oracle::randomRotation(d, rng);
      const ThetaSet th = ThetaSet::full(d);
      CHECK(uTheta(Matrix(k * a), th).sameAs(actOnFlag(k, uTheta(a, th))));
    }
}

TEST_CASE("transversality") {
  const ThetaSet full = ThetaSet::full(3);
  const Transversality t = isTransverse(Flag::standard(full), Flag::opposite(full));
  CHECK(t.transverse);
  CHECK(t.witness == doctest::Approx(1.0));
  const Transversality u = isTransverse(Flag::standard(full), Flag::standard(full));
  CHECK_FALSE(u.transverse);
  CHECK(u.witness < 1e-12);
}

TEST_CASE("flag distance") {
  const ThetaSet th(2, {1});
  Matrix r(2, 2);
  const double c = std::sqrt(0.5);
  r << c, -c, c, c;
  const Flag e = Flag::standard(th);
  CHECK(flagDistance(e, e) == doctest::Approx(0.0));
  CHECK(flagDistance(e, Flag::opposite(th)) == doctest::Approx(1.0));
  CHECK(flagDistance(e, Flag(th, r)) == doctest::Approx(0.7071).epsilon(1e-4));

  std::mt19937_64 rng(4);
  const ThetaSet full = ThetaSet::full(4);
  for (int t = 0; t < 20; ++t) {
    const Flag x(full, oracle::randomRotation(4, rng));
    const Flag y(full, oracle::randomRotation(4, rng));
    const Flag z(full, oracle::randomRotation(4, rng));
    CHECK(flagDistance(x, y) == doctest::Approx(flagDistance(y, x)));
    CHECK(flagDistance(x, z) <= flagDistance(x, y) + flagDistance(y, z) + 1e-12);
    CHECK(flagDistance(x, y) <= 1.0 + 1e-12);
  }
}

TEST_CASE("attracting fixed flag") {
  const ThetaSet full = ThetaSet::full(3);
  std::mt19937_64 rng(6);
  const Matrix g = oracle::randomSL(3, rng);
  const Matrix a = g * diag({3.0, 1.0, 1.0 / 3.0}) * g.inverse();
  const Flag f = attractingFixedFlag(a, full);
  CHECK(actOnFlag(a, f).sameAs(f, 1e-9));
  ElementStack p = ElementStack::fromMatrix(a);
  for (int i = 0; i < 5; ++i) p = p * p;  // a^32
  CHECK(flagDistance(uTheta(p, full), f) < 1e-6);
  try {
    attractingFixedFlag(diag({2.0, 2.0, 0.25}), full);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotProximal);
  }
}

TEST_CASE("limit set sample of a cyclic group has two points") {
  const GroupPresentation p({diag({3.0, 1.0, 1.0 / 3.0})});
  const LimitSetSample s = sampleLimitSet(p, ThetaSet::full(3), 5);
  REQUIRE(s.points.size() == 2);
  CHECK(s.points[0].flag.sameAs(Flag::standard(ThetaSet::full(3))));
  CHECK(s.points[1].flag.sameAs(Flag::opposite(ThetaSet::full(3))));
  std::vector<Flag> a{s.points[0].flag};
  std::vector<Flag> b{s.points[0].flag, s.points[1].flag};
  CHECK(directedHausdorff(a, b) == doctest::Approx(0.0));
  CHECK(hausdorffDistance(a, b) == doctest::Approx(1.0));
}
