#include "pslab/matgroup.hpp"

#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace pslab {

Word freelyReduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverseLetter(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word inverseWord(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l = inverseLetter(l);
  return out;
}

std::vector<int> toSigned(const Word& w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (Letter l : w) out.push_back((l % 2 == 0) ? l / 2 + 1 : -(l / 2 + 1));
  return out;
}

Word fromSigned(const std::vector<int>& signedWord) {
  Word out;
  out.reserve(signedWord.size());
  for (int s : signedWord) {
    if (s == 0) throw Error(ErrorCode::BadIndex, "generator index 0 in signed word");
    out.push_back(s > 0 ? 2 * (s - 1) : 2 * (-s - 1) + 1);
  }
  return out;
}

// ---------------------------------------------------------------------------
// ElementStack

ElementStack ElementStack::identity(int d) {
  ElementStack s;
  s.d_ = d;
  for (int k = 1; k <= d / 2; ++k) {
    const auto n = static_cast<Eigen::Index>(binomial(d, k));
    s.lower_.push_back(Matrix::Identity(n, n));
  }
  for (int j = 1; j <= d - 1 - d / 2; ++j) {
    const auto n = static_cast<Eigen::Index>(binomial(d, j));
    s.upper_.push_back(Matrix::Identity(n, n));
  }
  return s;
}

ElementStack ElementStack::fromMatrix(const Matrix& a) {
  const Matrix m = normalizeUnimodular(a);
  const int d = static_cast<int>(m.rows());
  if (d < 2) throw Error(ErrorCode::BadIndex, "dimension must be at least 2");
  ElementStack s;
  s.d_ = d;
  s.lower_.push_back(m);
  for (int k = 2; k <= d / 2; ++k) s.lower_.push_back(exteriorPowerRep(m, k));
  if (d - 1 - d / 2 >= 1) {
    const Matrix invT = m.fullPivLu().inverse().transpose();
    s.upper_.push_back(invT);
    for (int j = 2; j <= d - 1 - d / 2; ++j) s.upper_.push_back(exteriorPowerRep(invT, j));
  }
  return s;
}

Matrix ElementStack::inverseTranspose() const {
  if (!upper_.empty()) return upper_.front();
  // d = 2: the inverse transpose of [[a,b],[c,d]] with det 1 is [[d,-c],[-b,a]].
  const Matrix& m = lower_.front();
  Matrix out(2, 2);
  out << m(1, 1), -m(1, 0), -m(0, 1), m(0, 0);
  return out;
}

ElementStack ElementStack::operator*(const ElementStack& o) const {
  ElementStack out = *this;
  out.rightMultiply(o);
  return out;
}

void ElementStack::rightMultiply(const ElementStack& o) {
  if (o.d_ != d_) throw Error(ErrorCode::InvalidArgument, "dimension mismatch in product");
  for (std::size_t i = 0; i < lower_.size(); ++i) lower_[i] = lower_[i] * o.lower_[i];
  for (std::size_t j = 0; j < upper_.size(); ++j) upper_[j] = upper_[j] * o.upper_[j];
}

const Matrix& ElementStack::level(int k) const {
  if (k < 1 || k >= d_) throw Error(ErrorCode::BadIndex, "exterior level " + std::to_string(k));
  return usesDual(k) ? upper_[static_cast<std::size_t>(d_ - k - 1)]
                     : lower_[static_cast<std::size_t>(k - 1)];
}

double ElementStack::omegaKappa(int k) const { return std::log(largestSingularValue(level(k))); }

double ElementStack::omegaJordan(int k) const { return std::log(spectralRadius(level(k))); }

namespace {

WeylVector fromOmegaSequence(const std::vector<double>& omegas) {
  // omegas has d+1 entries with omega_0 = omega_d = 0.
  const int d = static_cast<int>(omegas.size()) - 1;
  std::vector<double> entries(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    entries[static_cast<std::size_t>(i)] =
        omegas[static_cast<std::size_t>(i) + 1] - omegas[static_cast<std::size_t>(i)];
  }
  std::stable_sort(entries.begin(), entries.end(), std::greater<>());
  Vector v(d);
  for (int i = 0; i < d; ++i) v(i) = entries[static_cast<std::size_t>(i)];
  return WeylVector(v);
}

}  // namespace

WeylVector ElementStack::kappa() const {
  std::vector<double> omegas(static_cast<std::size_t>(d_) + 1, 0.0);
  for (int k = 1; k < d_; ++k) omegas[static_cast<std::size_t>(k)] = omegaKappa(k);
  return fromOmegaSequence(omegas);
}

WeylVector ElementStack::jordan() const {
  std::vector<double> omegas(static_cast<std::size_t>(d_) + 1, 0.0);
  for (int k = 1; k < d_; ++k) omegas[static_cast<std::size_t>(k)] = omegaJordan(k);
  return fromOmegaSequence(omegas);
}

double ElementStack::logWedgeGrowth(int k, const Matrix& frame) const {
  if (usesDual(k)) {
    const Vector w = pluckerCoordinates(frame.rightCols(d_ - k));
    return std::log((level(k) * w).norm());
  }
  const Vector w = pluckerCoordinates(frame.leftCols(k));
  return std::log((level(k) * w).norm());
}

Matrix ElementStack::transportedSubspace(int k, const Matrix& frame) const {
  if (usesDual(k)) {
    const int c = d_ - k;
    const Vector w = level(k) * pluckerCoordinates(frame.rightCols(c));
    return subspaceFromPlucker(w, d_, c);
  }
  const Vector w = level(k) * pluckerCoordinates(frame.leftCols(k));
  return subspaceFromPlucker(w, d_, k);
}

Matrix ElementStack::leadingSubspace(int k) const {
  const int dimension = usesDual(k) ? d_ - k : k;
  const Matrix top = leadingLeftSingularVectors(level(k), 1);
  return subspaceFromPlucker(top.col(0), d_, dimension);
}

// ---------------------------------------------------------------------------
// GroupPresentation

GroupPresentation::GroupPresentation(std::vector<Matrix> generators, std::vector<std::string> labels,
                                     bool assumeFree)
    : d_(0), labels_(std::move(labels)), assumeFree_(assumeFree) {
  if (generators.empty()) throw Error(ErrorCode::InvalidArgument, "presentation needs a generator");
  d_ = static_cast<int>(generators.front().rows());
  for (auto& g : generators) {
    if (g.rows() != d_ || g.cols() != d_) {
      throw Error(ErrorCode::InvalidArgument, "generators must all be d x d");
    }
    generators_.push_back(normalizeUnimodular(g));
  }
  if (labels_.empty()) {
    for (std::size_t i = 0; i < generators_.size(); ++i) {
      labels_.push_back(i < 26 ? std::string(1, static_cast<char>('a' + i)) : "g" + std::to_string(i + 1));
    }
  }
  if (labels_.size() != generators_.size()) {
    throw Error(ErrorCode::InvalidArgument, "label count does not match generator count");
  }
  for (const auto& g : generators_) {
    letters_.push_back(ElementStack::fromMatrix(g));
    letters_.push_back(ElementStack::fromMatrix(g.fullPivLu().inverse()));
  }
}

std::string GroupPresentation::wordString(const Word& w) const {
  if (w.empty()) return "e";
  std::string out;
  for (Letter l : w) {
    const auto& label = labels_.at(static_cast<std::size_t>(l / 2));
    if (l % 2 == 0) {
      out += label;
    } else if (label.size() == 1 && std::islower(static_cast<unsigned char>(label[0]))) {
      out += static_cast<char>(std::toupper(static_cast<unsigned char>(label[0])));
    } else {
      out += label + "^-1";
    }
  }
  return out;
}

ElementStack GroupPresentation::evaluate(const Word& w) const {
  ElementStack s = ElementStack::identity(d_);
  for (Letter l : w) {
    if (l < 0 || l >= letterCount()) throw Error(ErrorCode::BadIndex, "letter out of range");
    s.rightMultiply(letterStack(l));
  }
  return s;
}

GroupElement makeElement(const GroupPresentation& p, const Word& w) {
  const Word reduced = freelyReduce(w);
  return GroupElement{reduced, p.evaluate(reduced)};
}

// ---------------------------------------------------------------------------
// Word balls

std::size_t freeBallSize(int rank, int n) {
  if (n < 0) return 0;
  std::size_t total = 1, sphere = 0;
  for (int len = 1; len <= n; ++len) {
    sphere = len == 1 ? static_cast<std::size_t>(2 * rank) : sphere * static_cast<std::size_t>(2 * rank - 1);
    total += sphere;
  }
  return total;
}

Word WordBall::word(std::size_t i) const {
  Word w(length_.at(i));
  std::size_t cur = i;
  for (std::size_t pos = w.size(); pos > 0; --pos) {
    w[pos - 1] = letter_[cur];
    cur = parent_[cur];
  }
  return w;
}

WeylVector WordBall::kappa(std::size_t i) const {
  const auto e = kappaEntries(i);
  return WeylVector(Eigen::Map<const Vector>(e.data(), d_));
}

GroupElement WordBall::element(const GroupPresentation& p, std::size_t i) const {
  if (hasStacks()) return GroupElement{word(i), stacks_.at(i)};
  return makeElement(p, word(i));
}

namespace {

struct MatrixKey {
  std::size_t operator()(const Matrix& m) const {
    std::size_t h = 1469598103934665603ull;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
      const double rounded = std::round(m.data()[i] * 1e8);
      const auto bits = std::hash<double>{}(rounded == 0.0 ? 0.0 : rounded);
      h = (h ^ bits) * 1099511628211ull;
    }
    return h;
  }
};

}  // namespace

WordBall wordBall(const GroupPresentation& p, int n, const BallOptions& options) {
  if (n < 0) throw Error(ErrorCode::InvalidArgument, "ball radius must be nonnegative");
  const std::size_t cap = options.elementCap ? options.elementCap : p.elementCap();
  const int letters = p.letterCount();
  const int d = p.dimension();
  const int workers = resolveWorkers(options.workers);
  if (p.assumeFree() && freeBallSize(p.rank(), n) > cap) {
    throw Error(ErrorCode::BudgetExceeded, "ball of radius " + std::to_string(n) + " has " +
                                               std::to_string(freeBallSize(p.rank(), n)) +
                                               " elements, cap is " + std::to_string(cap));
  }

  WordBall ball;
  ball.d_ = d;
  ball.parent_.push_back(0);
  ball.letter_.push_back(-1);
  ball.length_.push_back(0);
  ball.sphereStart_ = {0, 1};
  ball.kappa_.assign(static_cast<std::size_t>(d), 0.0);

  std::vector<ElementStack> current{ElementStack::identity(d)};
  if (options.keepStacks) ball.stacks_.push_back(current.front());
  if (options.visitor) options.visitor(0, 0, std::span<const ElementStack>(current));

  // Dedup state for non-free presentations: every accepted matrix so far.
  std::unordered_multimap<std::size_t, std::size_t> seen;
  std::vector<Matrix> seenMatrices;
  if (!p.assumeFree()) {
    seen.emplace(MatrixKey{}(current.front().matrix()), 0);
    seenMatrices.push_back(current.front().matrix());
  }

  for (int len = 1; len <= n; ++len) {
    const std::size_t parentOffset = ball.sphereStart_[static_cast<std::size_t>(len - 1)];
    const std::size_t parents = current.size();
    const std::size_t branching = len == 1 ? static_cast<std::size_t>(letters)
                                           : static_cast<std::size_t>(letters - 1);
    const std::size_t candidates = parents * branching;

    std::vector<std::uint32_t> candParent(candidates);
    std::vector<std::int16_t> candLetter(candidates);
    for (std::size_t pi = 0; pi < parents; ++pi) {
      const Letter last = len == 1 ? -1 : ball.letter_[parentOffset + pi];
      std::size_t slot = pi * branching;
      for (Letter l = 0; l < letters; ++l) {
        if (last >= 0 && l == inverseLetter(last)) continue;
        candParent[slot] = static_cast<std::uint32_t>(pi);
        candLetter[slot] = static_cast<std::int16_t>(l);
        ++slot;
      }
    }

    std::vector<ElementStack> next(candidates);
    parallelFor(candidates, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c) {
        next[c] = current[candParent[c]] * p.letterStack(candLetter[c]);
      }
    });

    std::vector<std::size_t> kept;
    kept.reserve(candidates);
    if (p.assumeFree()) {
      kept.resize(candidates);
      std::iota(kept.begin(), kept.end(), std::size_t{0});
    } else {
      for (std::size_t c = 0; c < candidates; ++c) {
        const Matrix& m = next[c].matrix();
        const std::size_t key = MatrixKey{}(m);
        const double scale = std::max(1.0, m.norm());
        bool duplicate = false;
        auto range = seen.equal_range(key);
        for (auto it = range.first; it != range.second && !duplicate; ++it) {
          duplicate = maxAbsDiff(seenMatrices[it->second], m) <= p.dedupTolerance() * scale;
        }
        if (duplicate) {
          ++ball.merged_;
          continue;
        }
        if (ball.size() + kept.size() + 1 > cap) {
          throw Error(ErrorCode::BudgetExceeded, "element cap " + std::to_string(cap) + " reached");
        }
        seen.emplace(key, seenMatrices.size());
        seenMatrices.push_back(m);
        kept.push_back(c);
      }
    }

    const std::size_t offset = ball.size();
    const std::size_t count = kept.size();
    ball.parent_.resize(offset + count);
    ball.letter_.resize(offset + count);
    ball.length_.resize(offset + count);
    ball.kappa_.resize((offset + count) * static_cast<std::size_t>(d));
    std::vector<ElementStack> sphere(count);
    parallelFor(count, workers, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        const std::size_t c = kept[i];
        sphere[i] = std::move(next[c]);
        ball.parent_[offset + i] = static_cast<std::uint32_t>(parentOffset + candParent[c]);
        ball.letter_[offset + i] = candLetter[c];
        ball.length_[offset + i] = static_cast<std::uint16_t>(len);
        const WeylVector k = sphere[i].kappa();
        std::copy(k.entries().data(), k.entries().data() + d,
                  ball.kappa_.begin() + static_cast<std::ptrdiff_t>((offset + i) * static_cast<std::size_t>(d)));
      }
    });
    ball.sphereStart_.push_back(offset + count);
    if (options.keepStacks) ball.stacks_.insert(ball.stacks_.end(), sphere.begin(), sphere.end());
    if (options.visitor) options.visitor(len, offset, std::span<const ElementStack>(sphere));
    current = std::move(sphere);
  }
  if (ball.merged_ > 0) {
    ball.warnings_.push_back("merged " + std::to_string(ball.merged_) +
                             " words whose matrices coincide with shorter words");
  }
  return ball;
}

// ---------------------------------------------------------------------------
// Conjugacy classes

bool isCyclicallyReduced(const Word& w) {
  if (w.empty()) return false;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (w[i + 1] == inverseLetter(w[i])) return false;
  }
  return w.size() == 1 || w.back() != inverseLetter(w.front());
}

Word cyclicCore(const Word& w) {
  const Word r = freelyReduce(w);
  std::size_t lo = 0, hi = r.size();
  while (hi - lo >= 2 && r[hi - 1] == inverseLetter(r[lo])) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

WeylVector jordanOfWord(const GroupPresentation& p, const Word& w) { return p.evaluate(cyclicCore(w)).jordan(); }

Word leastRotation(const Word& w) {
  const std::size_t n = w.size();
  std::size_t best = 0;
  for (std::size_t r = 1; r < n; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const Letter a = w[(r + i) % n], b = w[(best + i) % n];
      if (a != b) {
        if (a < b) best = r;
        break;
      }
    }
  }
  Word out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = w[(best + i) % n];
  return out;
}

bool isProperPower(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t period = 1; period < n; ++period) {
    if (n % period != 0) continue;
    bool periodic = true;
    for (std::size_t i = period; i < n && periodic; ++i) periodic = w[i] == w[i - period];
    if (periodic) return true;
  }
  return false;
}

namespace {

// 0: not the least rotation; 1: least rotation, primitive; 2: least, proper power.
int classifyRotation(const Letter* w, std::size_t n) {
  bool periodic = false;
  for (std::size_t r = 1; r < n; ++r) {
    std::size_t i = 0;
    for (; i < n; ++i) {
      const Letter a = w[(r + i) % n], b = w[i];
      if (a != b) {
        if (a < b) return 0;
        break;
      }
    }
    if (i == n) periodic = true;
  }
  return periodic ? 2 : 1;
}

}  // namespace

ClassEnumeration conjugacyClasses(const GroupPresentation& p, int n, bool primitiveOnly, int workers,
                                  double collisionTolerance) {
  if (!p.assumeFree()) {
    throw Error(ErrorCode::NotFree, "conjugacy classes are enumerated only for free presentations");
  }
  if (n < 1) return {};
  const int letters = p.letterCount();
  const int d = p.dimension();
  std::vector<std::vector<ClassRepresentative>> perShard(static_cast<std::size_t>(letters));

  parallelFor(static_cast<std::size_t>(letters), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t shard = begin; shard < end; ++shard) {
      auto& out = perShard[shard];
      std::vector<Letter> word(static_cast<std::size_t>(n));
      std::vector<ElementStack> prefix(static_cast<std::size_t>(n) + 1);
      std::vector<Letter> nextLetter(static_cast<std::size_t>(n) + 1, 0);
      prefix[0] = ElementStack::identity(d);
      word[0] = static_cast<Letter>(shard);
      prefix[1] = prefix[0] * p.letterStack(word[0]);
      std::size_t depth = 1;
      nextLetter[1] = 0;
      bool visit = true;
      while (depth >= 1) {
        if (visit) {
          const Letter first = word[0], last = word[depth - 1];
          if (depth == 1 || last != inverseLetter(first)) {
            const int kind = classifyRotation(word.data(), depth);
            if (kind != 0 && !(primitiveOnly && kind == 2)) {
              out.push_back({Word(word.begin(), word.begin() + static_cast<std::ptrdiff_t>(depth)),
                             prefix[depth].jordan(), kind == 1});
            }
          }
          visit = false;
          nextLetter[depth] = 0;
        }
        if (depth == static_cast<std::size_t>(n)) {
          --depth;
          continue;
        }
        Letter l = nextLetter[depth];
        const Letter forbidden = inverseLetter(word[depth - 1]);
        if (l == forbidden) ++l;
        // A rotation-minimal word never contains a letter smaller than its first.
        while (l < letters && l < word[0]) {
          ++l;
          if (l == forbidden) ++l;
        }
        if (l >= letters) {
          --depth;
          continue;
        }
        nextLetter[depth] = l + 1;
        word[depth] = l;
        prefix[depth + 1] = prefix[depth] * p.letterStack(l);
        ++depth;
        visit = true;
      }
    }
  });

  ClassEnumeration result;
  for (auto& shard : perShard) {
    for (auto& rep : shard) result.representatives.push_back(std::move(rep));
  }
  std::stable_sort(result.representatives.begin(), result.representatives.end(),
                   [](const ClassRepresentative& a, const ClassRepresentative& b) {
                     if (a.word.size() != b.word.size()) return a.word.size() < b.word.size();
                     return a.word < b.word;
                   });

  std::vector<std::size_t> order(result.representatives.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto& reps = result.representatives;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Vector& x = reps[a].nu.entries();
    const Vector& y = reps[b].nu.entries();
    return std::lexicographical_compare(x.data(), x.data() + x.size(), y.data(), y.data() + y.size());
  });
  for (std::size_t i = 0; i + 1 < order.size(); ++i) {
    const auto a = order[i], b = order[i + 1];
    if ((reps[a].nu.entries() - reps[b].nu.entries()).cwiseAbs().maxCoeff() <= collisionTolerance) {
      result.nuCollisions.emplace_back(std::min(a, b), std::max(a, b));
    }
  }
  return result;
}

// ---------------------------------------------------------------------------
// Representations

Matrix exteriorPowerRep(const Matrix& a, int k) {
  const int d = static_cast<int>(a.rows());
  if (a.cols() != d || k < 1 || k > d - 1) {
    if (!(a.cols() == d && k == d)) throw Error(ErrorCode::BadIndex, "exterior power index " + std::to_string(k));
  }
  if (k == 1) return a;
  const auto subsets = kSubsets(d, k);
  const auto n = static_cast<Eigen::Index>(subsets.size());
  Matrix out(n, n);
  Matrix minor(k, k);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (int r = 0; r < k; ++r) {
        for (int c = 0; c < k; ++c) {
          minor(r, c) = a(subsets[static_cast<std::size_t>(i)][static_cast<std::size_t>(r)],
                          subsets[static_cast<std::size_t>(j)][static_cast<std::size_t>(c)]);
        }
      }
      out(i, j) = minor.determinant();
    }
  }
  return out;
}

Matrix symmetricPowerRep(const Matrix& a, int d) {
  if (a.rows() != 2 || a.cols() != 2) throw Error(ErrorCode::BadIndex, "symmetric power needs a 2x2 matrix");
  if (d < 2) throw Error(ErrorCode::BadIndex, "symmetric power dimension must be at least 2");
  const Matrix m = normalizeUnimodular(a);
  const int degree = d - 1;
  // Column j: (a e1 + c e2)^{degree-j} (b e1 + d e2)^j in coefficients of e1^{degree-i} e2^i.
  auto multiply = [](const std::vector<double>& f, double x, double y) {
    std::vector<double> g(f.size() + 1, 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      g[i] += f[i] * x;
      g[i + 1] += f[i] * y;
    }
    return g;
  };
  Matrix out(d, d);
  for (int j = 0; j <= degree; ++j) {
    std::vector<double> poly{1.0};
    for (int t = 0; t < degree - j; ++t) poly = multiply(poly, m(0, 0), m(1, 0));
    for (int t = 0; t < j; ++t) poly = multiply(poly, m(0, 1), m(1, 1));
    for (int i = 0; i <= degree; ++i) {
      const double scale = std::sqrt(static_cast<double>(binomial(degree, j)) /
                                     static_cast<double>(binomial(degree, i)));
      out(i, j) = poly[static_cast<std::size_t>(i)] * scale;
    }
  }
  return out;
}

std::vector<WeylVector> limitConeSample(const GroupPresentation& p, const ThetaSet& theta, int n, int workers,
                                        double tolerance) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sphere radius must be at least 1");
  BallOptions options;
  options.workers = workers;
  const WordBall ball = wordBall(p, n, options);
  std::vector<WeylVector> out;
  for (std::size_t i = ball.sphereBegin(n); i < ball.sphereEnd(n); ++i) {
    const WeylVector v = projectTheta(ball.kappa(i), theta);
    const double norm = v.norm();
    if (norm > tolerance) out.push_back(v * (1.0 / norm));
  }
  return out;
}

}  // namespace pslab
