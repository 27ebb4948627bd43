// Randomized identities on random words in SL(2), SL(3) and SL(4).

#include "oracle.hpp"

#include "pslab/cocycle.hpp"
#include "pslab/flags.hpp"
#include "pslab/matgroup.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace pslab;

namespace {

GroupPresentation randomPresentation(int d, std::mt19937_64& rng) {
  std::vector<Matrix> gens;
  for (int i = 0; i < 3; ++i) gens.push_back(oracle::randomSL(d, rng, 0.7));
  return GroupPresentation(gens);
}

Word randomWord(const GroupPresentation& p, std::mt19937_64& rng, int maxLength) {
  std::uniform_int_distribution<int> len(1, maxLength);
  std::uniform_int_distribution<int> letter(0, p.letterCount() - 1);
  Word w;
  const int n = len(rng);
  while (static_cast<int>(w.size()) < n) {
    const int l = letter(rng);
    if (!w.empty() && w.back() == inverseLetter(l)) continue;
    w.push_back(l);
  }
  return w;
}

}  // namespace

TEST_CASE("random words satisfy the projection and cocycle identities") {
  std::mt19937_64 rng(2024);
  for (int d = 2; d <= 4; ++d) {
    const GroupPresentation p = randomPresentation(d, rng);
    const ThetaSet th = ThetaSet::full(d);
    for (int t = 0; t < 60; ++t) {
      const Word w = randomWord(p, rng, 8);
      const Word v = randomWord(p, rng, 6);
      const ElementStack a = p.evaluate(w);
      const ElementStack b = p.evaluate(v);
      const WeylVector k = a.kappa();

      CHECK((p.evaluate(inverseWord(w)).kappa() + hatIota(k)).norm() < 1e-9);

      const WeylVector nu = jordanOfWord(p, w);
      Word w3 = w;
      for (int i = 0; i < 2; ++i) w3.insert(w3.end(), w.begin(), w.end());
      CHECK((jordanOfWord(p, w3) - nu * 3.0).norm() <= 1e-6 * std::max(1.0, 3.0 * nu.norm()));

      Word c = v;
      c.insert(c.end(), w.begin(), w.end());
      const Word vi = inverseWord(v);
      c.insert(c.end(), vi.begin(), vi.end());
      CHECK((jordanOfWord(p, c) - nu).norm() < 1e-8);
      CHECK(cyclicCore(c).size() <= w.size());

      const Flag f(th, oracle::randomRotation(d, rng));
      const WeylVector lhs = iwasawa(a * b, f);
      const WeylVector rhs = iwasawa(a, actOnFlag(b, f)) + iwasawa(b, f);
      CHECK((lhs - rhs).norm() < 1e-8 * std::max(1.0, lhs.norm()));

      const WeylVector kab = (a * b).kappa();
      const WeylVector kb = b.kappa();
      for (int j = 1; j < d; ++j) CHECK(kab.omega(j) <= k.omega(j) + kb.omega(j) + 1e-9);
    }
  }
}

TEST_CASE("ElementStack projections agree with direct decompositions on short words") {
  std::mt19937_64 rng(99);
  for (int d = 2; d <= 4; ++d) {
    const GroupPresentation p = randomPresentation(d, rng);
    for (int t = 0; t < 30; ++t) {
      const Word w = randomWord(p, rng, 4);
      const ElementStack a = p.evaluate(w);
      CHECK((a.kappa().entries() - oracle::logSingular(a.matrix())).cwiseAbs().maxCoeff() < 1e-7);
      CHECK((a.jordan().entries() - oracle::logEigenModuli(a.matrix())).cwiseAbs().maxCoeff() < 1e-7);
    }
  }
}

TEST_CASE("limit flags are equivariant along words") {
  std::mt19937_64 rng(5);
  const int d = 3;
  Matrix a = Matrix::Zero(d, d), b = Matrix::Zero(d, d);
  a.diagonal() << std::exp(2.0), 1.0, std::exp(-2.0);
  const Matrix q = oracle::randomRotation(d, rng);
  b = q * a * q.transpose();
  const GroupPresentation p({a, b});
  const ThetaSet th = ThetaSet::full(d);
  for (int t = 0; t < 30; ++t) {
    const Word w = randomWord(p, rng, 10);
    if (w.size() < 6) continue;
    const ElementStack g = p.evaluate(w);
    const Word pre{0};
    const ElementStack ag = p.evaluate(freelyReduce([&] {
      Word x = pre;
      x.insert(x.end(), w.begin(), w.end());
      return x;
    }()));
    // U(a g) is close to a U(g) once g is long
    const double dist = flagDistance(uTheta(ag, th), actOnFlag(p.letterStack(0), uTheta(g, th)));
    CHECK(dist < 0.1);
  }
}
