#pragma once

// Reference computations that share no code with the library: eigen-solvers
// on A^T A, cofactor minors, closed-form hyperbolic geometry, brute-force
// enumeration of cyclic words.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// log singular values, decreasing (fine for moderately conditioned input)
inline Vec logSingular(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> es(a.transpose() * a);
  Vec ev = es.eigenvalues();
  Vec out(ev.size());
  for (int i = 0; i < ev.size(); ++i) out(i) = 0.5 * std::log(ev(ev.size() - 1 - i));
  return out;
}

inline Vec logEigenModuli(const Mat& a) {
  Eigen::ComplexEigenSolver<Mat> es(a);
  std::vector<double> m;
  for (int i = 0; i < a.rows(); ++i) m.push_back(std::log(std::abs(es.eigenvalues()(i))));
  std::sort(m.rbegin(), m.rend());
  return Eigen::Map<Vec>(m.data(), static_cast<Eigen::Index>(m.size()));
}

// Laplace expansion along the first row
inline double det(const Mat& a) {
  const int n = static_cast<int>(a.rows());
  if (n == 1) return a(0, 0);
  double s = 0.0;
  for (int j = 0; j < n; ++j) {
    Mat m(n - 1, n - 1);
    for (int r = 1; r < n; ++r)
      for (int c = 0, cc = 0; c < n; ++c)
        if (c != j) m(r - 1, cc++) = a(r, c);
    s += ((j % 2) ? -1.0 : 1.0) * a(0, j) * det(m);
  }
  return s;
}

inline void subsets(int n, int k, int start, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    subsets(n, k, i + 1, cur, out);
    cur.pop_back();
  }
}

// Lambda^k A in the lexicographic basis: entry (I, J) is the minor A[I, J]
inline Mat wedge(const Mat& a, int k) {
  std::vector<std::vector<int>> s;
  std::vector<int> cur;
  subsets(static_cast<int>(a.rows()), k, 0, cur, s);
  Mat out(s.size(), s.size());
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = 0; j < s.size(); ++j) {
      Mat m(k, k);
      for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c) m(r, c) = a(s[i][r], s[j][c]);
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = det(m);
    }
  return out;
}

// d_H(i, B i) in the upper half plane
inline double hyperbolicDisplacement(const Mat& b) {
  const std::complex<double> i(0.0, 1.0);
  const std::complex<double> z = (b(0, 0) * i + b(0, 1)) / (b(1, 0) * i + b(1, 1));
  return std::acosh(1.0 + std::norm(z - i) / (2.0 * z.imag()));
}

// distance of two Klein-disk points through the hyperboloid
inline double hyperboloidDistance(const Vec& x, const Vec& y) {
  const double gx = 1.0 / std::sqrt(1.0 - x.squaredNorm());
  const double gy = 1.0 / std::sqrt(1.0 - y.squaredNorm());
  const double c = gx * gy * (1.0 - x.dot(y));
  return std::acosh(std::max(1.0, c));
}

// Busemann function at boundary point xi of the unit disk, normalized at 0,
// for a Klein-model point x
inline double kleinBusemann(const Vec& xi, const Vec& x) {
  const Vec p = x / (1.0 + std::sqrt(1.0 - x.squaredNorm()));
  return std::log((xi - p).squaredNorm() / (1.0 - p.squaredNorm()));
}

inline Mat randomSL(int d, std::mt19937_64& rng, double spread = 1.0) {
  std::normal_distribution<double> g(0.0, spread);
  for (;;) {
    Mat a(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) a(i, j) = g(rng);
    double dt = a.determinant();
    if (std::abs(dt) < 1e-3) continue;
    if (dt < 0) {
      a.row(0) *= -1.0;
      dt = -dt;
    }
    return a / std::pow(dt, 1.0 / d);
  }
}

inline Mat randomRotation(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat a(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) a(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(a);
  Mat q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1.0;
  return q;
}

// Cyclic words over letters 0..2r-1 (l^1 is the inverse of l): one least
// rotation per class of cyclically reduced words of length 1..n.
struct CyclicWord {
  std::vector<int> letters;
  bool primitive;
};

inline std::vector<CyclicWord> cyclicClasses(int rank, int n) {
  std::vector<CyclicWord> out;
  const int m = 2 * rank;
  std::vector<int> w;
  std::function<void(int)> rec = [&](int len) {
    if (static_cast<int>(w.size()) == len) {
      if ((w.front() ^ 1) == w.back() && len > 1) return;
      for (int s = 1; s < len; ++s) {
        std::vector<int> r(w.begin() + s, w.end());
        r.insert(r.end(), w.begin(), w.begin() + s);
        if (r < w) return;
      }
      bool prim = true;
      for (int p = 1; p < len; ++p) {
        if (len % p) continue;
        bool periodic = true;
        for (int i = p; i < len && periodic; ++i) periodic = w[i] == w[i - p];
        if (periodic) {
          prim = false;
          break;
        }
      }
      out.push_back({w, prim});
      return;
    }
    for (int l = 0; l < m; ++l) {
      if (!w.empty() && (w.back() ^ 1) == l) continue;
      w.push_back(l);
      rec(len);
      w.pop_back();
    }
  };
  for (int len = 1; len <= n; ++len) rec(len);
  return out;
}

// translation length 2 log|lambda| of a hyperbolic 2x2 matrix
inline double translationLength(const Mat& a) {
  const double t = std::abs(a.trace());
  if (t <= 2.0) return 0.0;
  return 2.0 * std::acosh(t / 2.0);
}

}  // namespace oracle
