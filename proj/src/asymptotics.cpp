#include "pslab/asymptotics.hpp"

#include "pslab/cocycle.hpp"
#include "pslab/errors.hpp"
#include "pslab/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace pslab {

const CountRow* CountTable::lastCertified() const {
  const CountRow* out = nullptr;
  for (const auto& row : rows) {
    if (row.certified) out = &row;
  }
  return out;
}

std::vector<double> classLengths(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                 int wordLengthMax, bool primitiveOnly, int workers) {
  const ClassEnumeration classes = conjugacyClasses(p, wordLengthMax, primitiveOnly, workers);
  const auto& reps = classes.representatives;
  std::vector<double> out(reps.size());
  parallelFor(reps.size(), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) out[i] = evalFunctional(phi, projectTheta(reps[i].nu, theta));
  });
  return out;
}

CountTable countClosedGeodesics(const GroupPresentation& p, const Functional& phi, const ThetaSet& theta,
                                double tMax, int rowCount, int wordLengthMax, bool primitiveOnly, double deltaHat,
                                int workers) {
  if (!(tMax > 0.0) || rowCount < 1) throw Error(ErrorCode::InvalidArgument, "need Tmax > 0 and at least one row");
  if (wordLengthMax < 1) throw Error(ErrorCode::InvalidArgument, "word length bound must be positive");
  if (!phi.supportedIn(theta)) throw Error(ErrorCode::ThetaMismatch, "phi is not supported in theta");
  const ClassEnumeration classes = conjugacyClasses(p, wordLengthMax, primitiveOnly, workers);
  const auto& reps = classes.representatives;
  std::vector<double> lengths(reps.size());
  parallelFor(reps.size(), resolveWorkers(workers), [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) lengths[i] = evalFunctional(phi, projectTheta(reps[i].nu, theta));
  });

  CountTable table;
  table.deltaHat = deltaHat;
  table.wordLengthMax = wordLengthMax;
  table.primitiveOnly = primitiveOnly;
  table.classCount = reps.size();
  table.nuCollisions = classes.nuCollisions.size();
  table.perLetterGrowth = std::numeric_limits<double>::infinity();
  std::vector<double> positive;
  for (std::size_t i = 0; i < reps.size(); ++i) {
    table.perLetterGrowth = std::min(table.perLetterGrowth, lengths[i] / static_cast<double>(reps[i].word.size()));
    if (lengths[i] > 0.0) {
      positive.push_back(lengths[i]);
    } else {
      ++table.nonPositiveCount;
    }
  }
  if (reps.empty()) table.perLetterGrowth = 0.0;
  table.certifiedCutoff = std::max(0.0, table.perLetterGrowth) * (wordLengthMax + 1);
  std::sort(positive.begin(), positive.end());

  for (int i = 1; i <= rowCount; ++i) {
    CountRow row;
    row.T = tMax * i / rowCount;
    row.count = static_cast<std::size_t>(std::upper_bound(positive.begin(), positive.end(), row.T) - positive.begin());
    row.unorientedCount = 0.5 * static_cast<double>(row.count);
    const double x = deltaHat * row.T;
    row.prediction = x > 0.0 ? std::exp(x) / x : std::numeric_limits<double>::quiet_NaN();
    row.ratio = static_cast<double>(row.count) / row.prediction;
    row.logCountOverT =
        row.count > 0 ? std::log(static_cast<double>(row.count)) / row.T : std::numeric_limits<double>::quiet_NaN();
    row.certified = row.T < table.certifiedCutoff;
    table.rows.push_back(row);
  }
  return table;
}

// --- point sets -------------------------------------------------------------

PointSet PointSet::euclidean(std::vector<Vector> points) {
  PointSet out;
  out.metric_ = Metric::Euclidean;
  if (points.empty()) return out;
  const auto dim = points.front().size();
  out.coords_.resize(static_cast<Eigen::Index>(points.size()), dim);
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim) throw Error(ErrorCode::InvalidArgument, "points have different dimensions");
    out.coords_.row(static_cast<Eigen::Index>(i)) = points[i].transpose();
  }
  return out;
}

namespace {

// Upper triangle (with diagonal) of the projector onto span(basis).
void appendProjector(const Matrix& basis, std::vector<double>& out) {
  const Matrix proj = basis * basis.transpose();
  for (Eigen::Index r = 0; r < proj.rows(); ++r) {
    for (Eigen::Index c = r; c < proj.cols(); ++c) out.push_back(proj(r, c));
  }
}

Matrix rowsToMatrix(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

}  // namespace

PointSet PointSet::projective(const std::vector<Vector>& points) {
  PointSet out;
  out.metric_ = Metric::Chordal;
  std::vector<std::vector<double>> rows;
  for (const auto& v : points) {
    const double n = v.norm();
    if (!(n > 0.0)) throw Error(ErrorCode::InvalidArgument, "projective points must be nonzero");
    const Vector u = v / n;
    out.frames_.push_back(u);
    rows.emplace_back();
    appendProjector(u, rows.back());
  }
  out.coords_ = rowsToMatrix(rows);
  return out;
}

PointSet PointSet::flags(std::vector<Flag> flags) {
  PointSet out;
  out.metric_ = Metric::Flag;
  std::vector<std::vector<double>> rows;
  for (const auto& f : flags) {
    if (!out.thetaIndices_.empty() && out.thetaIndices_ != f.theta().indices()) {
      throw Error(ErrorCode::ThetaMismatch, "flags have different theta");
    }
    out.thetaIndices_ = f.theta().indices();
    out.frames_.push_back(f.frame());
    rows.emplace_back();
    for (int k : out.thetaIndices_) appendProjector(f.subspace(k), rows.back());
  }
  out.coords_ = rowsToMatrix(rows);
  return out;
}

double PointSet::distance(std::size_t i, std::size_t j) const {
  const auto a = static_cast<Eigen::Index>(i), b = static_cast<Eigen::Index>(j);
  switch (metric_) {
    case Metric::Euclidean:
      return (coords_.row(a) - coords_.row(b)).norm();
    case Metric::Chordal: {
      const Vector& u = frames_[i];
      const Vector& v = frames_[j];
      return (u - u.dot(v) * v).norm();
    }
    case Metric::Flag: {
      const Matrix& f = frames_[i];
      const Matrix& g = frames_[j];
      const auto d = f.rows();
      double out = 0.0;
      for (int k : thetaIndices_) {
        const Matrix m = g.rightCols(d - k).transpose() * f.leftCols(k);
        out = std::max(out, std::min(1.0, largestSingularValue(m)));
      }
      return out;
    }
  }
  return 0.0;
}

PointSet PointSet::canonical(double tolerance) const {
  std::vector<std::size_t> order(size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  const auto cols = coords_.cols();
  auto rowLess = [&](std::size_t x, std::size_t y) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double a = coords_(static_cast<Eigen::Index>(x), c), b = coords_(static_cast<Eigen::Index>(y), c);
      if (a != b) return a < b;
    }
    return x < y;
  };
  std::sort(order.begin(), order.end(), rowLess);
  std::vector<std::size_t> kept;
  for (std::size_t idx : order) {
    // Compare against every kept point that could still be within tolerance
    // in the first coordinate (the list is sorted on it).
    bool repeat = false;
    for (auto it = kept.rbegin(); it != kept.rend(); ++it) {
      const auto r = static_cast<Eigen::Index>(*it);
      if (cols == 0 || coords_(static_cast<Eigen::Index>(idx), 0) - coords_(r, 0) > tolerance) break;
      if ((coords_.row(static_cast<Eigen::Index>(idx)) - coords_.row(r)).cwiseAbs().maxCoeff() <= tolerance) {
        repeat = true;
        break;
      }
    }
    if (!repeat) kept.push_back(idx);
  }
  PointSet out;
  out.metric_ = metric_;
  out.thetaIndices_ = thetaIndices_;
  out.coords_.resize(static_cast<Eigen::Index>(kept.size()), cols);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.coords_.row(static_cast<Eigen::Index>(i)) = coords_.row(static_cast<Eigen::Index>(kept[i]));
    if (!frames_.empty()) out.frames_.push_back(frames_[kept[i]]);
  }
  return out;
}

namespace {

// Up to three coordinates with the widest range, used for the grid hash.
std::vector<Eigen::Index> hashCoordinates(const Matrix& coords) {
  std::vector<std::pair<double, Eigen::Index>> spread;
  for (Eigen::Index c = 0; c < coords.cols(); ++c) {
    spread.emplace_back(-(coords.col(c).maxCoeff() - coords.col(c).minCoeff()), c);
  }
  std::sort(spread.begin(), spread.end());
  std::vector<Eigen::Index> out;
  for (std::size_t i = 0; i < spread.size() && i < 3; ++i) out.push_back(spread[i].second);
  return out;
}

struct CellHash {
  std::size_t operator()(const std::array<std::int64_t, 3>& c) const {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto v : c) {
      h ^= static_cast<std::uint64_t>(v);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }
};

}  // namespace

std::size_t greedyCoverCount(const PointSet& points, double eps) {
  if (!(eps > 0.0)) throw Error(ErrorCode::InvalidArgument, "scale must be positive");
  const std::size_t n = points.size();
  if (n == 0) return 0;
  const Matrix& coords = points.coordinates();
  const std::vector<Eigen::Index> hashed = hashCoordinates(coords);
  auto cellOf = [&](std::size_t i) {
    std::array<std::int64_t, 3> cell{0, 0, 0};
    for (std::size_t j = 0; j < hashed.size(); ++j) {
      cell[j] = static_cast<std::int64_t>(std::floor(coords(static_cast<Eigen::Index>(i), hashed[j]) / eps));
    }
    return cell;
  };
  std::unordered_map<std::array<std::int64_t, 3>, std::vector<std::size_t>, CellHash> centers;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto cell = cellOf(i);
    bool covered = false;
    const int span = static_cast<int>(hashed.size());
    for (int dx = -1; dx <= 1 && !covered; ++dx) {
      for (int dy = (span > 1 ? -1 : 0); dy <= (span > 1 ? 1 : 0) && !covered; ++dy) {
        for (int dz = (span > 2 ? -1 : 0); dz <= (span > 2 ? 1 : 0) && !covered; ++dz) {
          const auto it = centers.find({cell[0] + dx, cell[1] + dy, cell[2] + dz});
          if (it == centers.end()) continue;
          for (std::size_t c : it->second) {
            if (points.distance(i, c) <= eps) {
              covered = true;
              break;
            }
          }
        }
      }
    }
    if (!covered) {
      centers[cell].push_back(i);
      ++count;
    }
  }
  return count;
}

BoxDimension boxCountingDimension(const PointSet& raw, const std::vector<double>& scaleGrid, int workers) {
  const PointSet points = raw.canonical();
  const std::size_t n = points.size();
  BoxDimension out;
  out.pointCount = n;
  // A handful of distinct points is a finite set: dimension 0.
  if (n < 10) return out;

  double diameter = 0.0;
  for (std::size_t i = 1; i < n; ++i) diameter = std::max(diameter, points.distance(0, i));
  diameter *= 2.0;
  if (!(diameter > 0.0)) return out;

  std::vector<double> grid = scaleGrid;
  const bool automatic = grid.empty();
  const int threads = resolveWorkers(workers);
  if (automatic) {
    // Quarter-octave scales, computed in batches until the cover saturates.
    for (int j = 0;; j += 8) {
      std::vector<double> batch;
      for (int k = j; k < j + 8; ++k) batch.push_back(diameter * std::pow(2.0, -0.25 * k));
      std::vector<std::size_t> counts(batch.size());
      parallelFor(batch.size(), threads, [&](std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) counts[i] = greedyCoverCount(points, batch[i]);
      });
      bool done = false;
      for (std::size_t i = 0; i < batch.size() && !done; ++i) {
        out.scales.emplace_back(batch[i], counts[i]);
        if (counts[i] >= n) done = true;
      }
      if (done || batch.back() < 1e-14 * diameter) break;
    }
  } else {
    if (grid.size() < 5) throw Error(ErrorCode::DegenerateScales, "at least 5 scales are required");
    std::sort(grid.begin(), grid.end(), std::greater<>());
    std::vector<std::size_t> counts(grid.size());
    parallelFor(grid.size(), threads, [&](std::size_t b, std::size_t e) {
      for (std::size_t i = b; i < e; ++i) counts[i] = greedyCoverCount(points, grid[i]);
    });
    for (std::size_t i = 0; i < grid.size(); ++i) out.scales.emplace_back(grid[i], counts[i]);
  }

  for (const auto& [eps, count] : out.scales) {
    if (count >= n) ++out.saturated;
  }
  std::vector<double> xs, ys;
  const double lowCount = automatic ? 10.0 : 2.0;
  const double highCount = automatic ? static_cast<double>(n) / 10.0 : static_cast<double>(n) - 1.0;
  out.fitBegin = out.scales.size();
  for (std::size_t i = 0; i < out.scales.size(); ++i) {
    const auto [eps, count] = out.scales[i];
    const double c = static_cast<double>(count);
    if (c >= lowCount && c <= highCount) {
      if (xs.empty()) out.fitBegin = i;
      out.fitEnd = i + 1;
      xs.push_back(std::log(1.0 / eps));
      ys.push_back(std::log(c));
    }
  }
  if (!automatic && static_cast<double>(out.saturated) > 0.4 * static_cast<double>(out.scales.size())) {
    throw Error(ErrorCode::DegenerateScales, std::to_string(out.saturated) + " of " +
                                                 std::to_string(out.scales.size()) + " scales saturate");
  }
  if (xs.size() < 5) {
    throw Error(ErrorCode::DegenerateScales, "only " + std::to_string(xs.size()) + " usable scales");
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  out.dimension = sxy / sxx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - my - out.dimension * (xs[i] - mx);
    rss += r * r;
  }
  out.residual = std::sqrt(rss / static_cast<double>(xs.size()));
  return out;
}

std::vector<Vector> cantorSample(int depth) {
  if (depth < 0 || depth > 24) throw Error(ErrorCode::InvalidArgument, "depth must be in [0, 24]");
  std::vector<double> left{0.0};
  double width = 1.0;
  for (int level = 0; level < depth; ++level) {
    width /= 3.0;
    std::vector<double> next;
    next.reserve(left.size() * 2);
    for (double x : left) {
      next.push_back(x);
      next.push_back(x + 2.0 * width);
    }
    left.swap(next);
  }
  std::vector<Vector> out;
  out.reserve(left.size());
  for (double x : left) out.push_back(Vector::Constant(1, x));
  return out;
}

DimensionReport hausdorffVsExponentExperiment(const GroupPresentation& p, int nMax, int workers,
                                              const ExponentOptions& options) {
  const int d = p.dimension();
  DimensionReport report;
  report.exponent =
      criticalExponent(p, Functional::alpha(1, d), ThetaSet::full(d), nMax, workers, options);
  const LimitSetSample sample = sampleLimitSet(p, ThetaSet(d, d == 2 ? std::vector<int>{1} : std::vector<int>{1, d - 1}),
                                               nMax, workers);
  std::vector<Vector> lines;
  for (const auto& point : sample.points) lines.push_back(point.flag.frame().col(0));
  report.samples = lines.size();
  report.skipped = sample.skipped;
  report.box = boxCountingDimension(PointSet::projective(lines), {}, workers);
  report.difference = report.exponent.deltaHat - report.box.dimension;
  return report;
}

}  // namespace pslab
