#pragma once

// Group presentations in SL(d,R), element stacks (matrices together with the
// exterior powers needed to read off kappa/nu/flags accurately), word-ball
// enumeration, conjugacy classes of free groups, and representation builders.

#include "pslab/cartan.hpp"
#include "pslab/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pslab {

/// Letter 2i is generator i, letter 2i+1 its inverse.
using Letter = int;
using Word = std::vector<Letter>;

inline Letter inverseLetter(Letter l) { return l ^ 1; }
Word freelyReduce(const Word& w);
Word inverseWord(const Word& w);
/// Signed 1-based generator indices (+i for g_i, -i for g_i^{-1}).
std::vector<int> toSigned(const Word& w);
Word fromSigned(const std::vector<int>& signedWord);

/// A matrix of SL(d,R) together with Lambda^k A for 1 <= k <= d/2 and
/// Lambda^j (A^{-T}) for 1 <= j < d - d/2. Products multiply every level, so
/// top singular values and eigenvalues of each level stay accurate even when
/// the small singular values of A itself are swamped by round-off.
class ElementStack {
 public:
  ElementStack() = default;
  static ElementStack identity(int d);
  /// Normalizes A to determinant 1 (see normalizeUnimodular) and builds the
  /// exterior powers from minors.
  static ElementStack fromMatrix(const Matrix& a);

  int dim() const { return d_; }
  const Matrix& matrix() const { return lower_.front(); }
  Matrix inverseTranspose() const;
  Matrix inverse() const { return inverseTranspose().transpose(); }

  ElementStack operator*(const ElementStack& o) const;
  /// this <- this * o
  void rightMultiply(const ElementStack& o);

  /// omega_k(kappa(A)) = log sigma_1(Lambda^k A).
  double omegaKappa(int k) const;
  /// omega_k(nu(A)) = log of the spectral radius of Lambda^k A.
  double omegaJordan(int k) const;
  WeylVector kappa() const;
  WeylVector jordan() const;

  /// log ||Lambda^k A (q_1 ^ ... ^ q_k)|| for the first k columns of the
  /// orthonormal frame Q (uses the dual half for k > d/2).
  double logWedgeGrowth(int k, const Matrix& frame) const;

  /// Orthonormal basis of A(span(q_1..q_k)) when k <= d/2, or of the
  /// orthogonal complement of A(span(q_1..q_k)) when k > d/2.
  Matrix transportedSubspace(int k, const Matrix& frame) const;

  /// The span of the k leading left singular vectors of A, returned as a
  /// basis when k <= d/2 and as a complement basis when k > d/2.
  Matrix leadingSubspace(int k) const;

  /// True when level k is stored on the dual (A^{-T}) side.
  bool usesDual(int k) const { return k > d_ / 2; }

 private:
  const Matrix& level(int k) const;

  int d_ = 0;
  std::vector<Matrix> lower_;  // Lambda^k A, k = 1..d/2
  std::vector<Matrix> upper_;  // Lambda^j A^{-T}, j = 1..d-1-d/2
};

class GroupPresentation {
 public:
  GroupPresentation(std::vector<Matrix> generators, std::vector<std::string> labels = {},
                    bool assumeFree = true);

  int dimension() const { return d_; }
  int rank() const { return static_cast<int>(generators_.size()); }
  int letterCount() const { return 2 * rank(); }
  const std::vector<Matrix>& generators() const { return generators_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool assumeFree() const { return assumeFree_; }
  double dedupTolerance() const { return dedupTolerance_; }
  std::size_t elementCap() const { return elementCap_; }

  void setDedupTolerance(double tolerance) { dedupTolerance_ = tolerance; }
  void setElementCap(std::size_t cap) { elementCap_ = cap; }

  const ElementStack& letterStack(Letter l) const { return letters_.at(static_cast<std::size_t>(l)); }
  std::string wordString(const Word& w) const;
  ElementStack evaluate(const Word& w) const;

 private:
  int d_;
  std::vector<Matrix> generators_;
  std::vector<std::string> labels_;
  bool assumeFree_;
  double dedupTolerance_ = 1e-8;
  std::size_t elementCap_ = 5'000'000;
  std::vector<ElementStack> letters_;
};

/// A group element: its defining (freely reduced) word and its stack.
struct GroupElement {
  Word word;
  ElementStack stack;

  const Matrix& matrix() const { return stack.matrix(); }
  int wordLength() const { return static_cast<int>(word.size()); }
};

GroupElement makeElement(const GroupPresentation& p, const Word& w);

/// Called once per completed sphere with its global index offset and stacks.
using SphereVisitor =
    std::function<void(int sphere, std::size_t offset, std::span<const ElementStack> stacks)>;

struct BallOptions {
  int workers = 1;
  bool keepStacks = false;
  /// 0 means the presentation's cap.
  std::size_t elementCap = 0;
  SphereVisitor visitor;
};

/// The word ball in canonical order (length, then lexicographic word). Words
/// are stored as a parent tree; kappa is stored for every element.
class WordBall {
 public:
  std::size_t size() const { return parent_.size(); }
  int radius() const { return static_cast<int>(sphereStart_.size()) - 2; }
  int dimension() const { return d_; }
  std::size_t sphereBegin(int n) const { return sphereStart_.at(static_cast<std::size_t>(n)); }
  std::size_t sphereEnd(int n) const { return sphereStart_.at(static_cast<std::size_t>(n) + 1); }
  int length(std::size_t i) const { return length_[i]; }
  Word word(std::size_t i) const;
  WeylVector kappa(std::size_t i) const;
  std::span<const double> kappaEntries(std::size_t i) const {
    return {kappa_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }
  bool hasStacks() const { return !stacks_.empty(); }
  const ElementStack& stack(std::size_t i) const { return stacks_.at(i); }
  GroupElement element(const GroupPresentation& p, std::size_t i) const;
  /// Number of candidate elements merged into an earlier element (non-free).
  std::size_t mergedCount() const { return merged_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

 private:
  friend WordBall wordBall(const GroupPresentation&, int, const BallOptions&);
  int d_ = 0;
  std::vector<std::uint32_t> parent_;
  std::vector<std::int16_t> letter_;
  std::vector<std::uint16_t> length_;
  std::vector<std::size_t> sphereStart_;
  std::vector<double> kappa_;
  std::vector<ElementStack> stacks_;
  std::size_t merged_ = 0;
  std::vector<std::string> warnings_;
};

/// |ball(n)| for a free group of rank r.
std::size_t freeBallSize(int rank, int n);

WordBall wordBall(const GroupPresentation& p, int n, const BallOptions& options = {});

struct ClassRepresentative {
  Word word;
  WeylVector nu;
  bool primitive = true;
};

struct ClassEnumeration {
  std::vector<ClassRepresentative> representatives;
  /// Adjacent pairs (in nu-sorted order) of representatives whose nu vectors
  /// agree within the collision tolerance.
  std::vector<std::pair<std::size_t, std::size_t>> nuCollisions;
};

/// One representative (the lexicographically least rotation) per class of
/// cyclically reduced words of length 1..n, ordered by (length, word).
ClassEnumeration conjugacyClasses(const GroupPresentation& p, int n, bool primitiveOnly,
                                  int workers = 1, double collisionTolerance = 1e-9);

/// Canonical (least) rotation of a cyclically reduced word.
Word leastRotation(const Word& w);
/// The cyclically reduced c with w = u c u^{-1} (w freely reduced first).
Word cyclicCore(const Word& w);
/// nu of the element w, read off its cyclic core: conjugation invariant by
/// construction, and the core is far better conditioned than u c u^{-1}.
WeylVector jordanOfWord(const GroupPresentation& p, const Word& w);
bool isCyclicallyReduced(const Word& w);
bool isProperPower(const Word& w);

/// Induced action on Lambda^k R^d in the lexicographic wedge basis.
Matrix exteriorPowerRep(const Matrix& a, int k);

/// The irreducible d-dimensional representation of SL(2,R) on binary forms of
/// degree d-1, in the monomial basis scaled by sqrt(binomial(d-1, j)) so that
/// SO(2) maps into SO(d).
Matrix symmetricPowerRep(const Matrix& a, int d);

/// Unit vectors kappa_theta(gamma)/|kappa_theta(gamma)| over the word sphere of
/// radius n (elements with |kappa_theta| <= tolerance are skipped).
std::vector<WeylVector> limitConeSample(const GroupPresentation& p, const ThetaSet& theta, int n,
                                        int workers = 1, double tolerance = 1e-10);

}  // namespace pslab
