#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lhd/rng.hpp"

namespace lhd {

/// Index of a grid level, 0..n-1. Coordinates are stored as levels and
/// converted to reals on demand so grid membership is exact.
using Level = std::uint32_t;
using Point = std::vector<Level>;

/// n equidistant levels per dimension on [0, 1], in d dimensions.
/// Level j maps to j / (n - 1); the one-level grid maps its single level to 0.5.
class GridSpec {
 public:
  GridSpec(std::size_t n, std::size_t d) : n_(n), d_(d) {
    if (n == 0) throw std::invalid_argument("grid needs at least one level (n >= 1)");
    if (d == 0) throw std::invalid_argument("grid needs at least one dimension (d >= 1)");
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }

  /// Distance between adjacent levels; 0 for the degenerate one-level grid.
  double spacing() const { return n_ == 1 ? 0.0 : 1.0 / static_cast<double>(n_ - 1); }

  double value(Level j) const {
    return n_ == 1 ? 0.5 : static_cast<double>(j) / static_cast<double>(n_ - 1);
  }

  std::vector<double> levels() const {
    std::vector<double> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = value(static_cast<Level>(j));
    return out;
  }

  /// Converts a distance in level units to [0, 1] units.
  double to_unit(double level_distance) const {
    return n_ == 1 ? 0.0 : level_distance / static_cast<double>(n_ - 1);
  }

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t n_;
  std::size_t d_;
};

/// Where a design came from. Written to JSON so runs can be reproduced.
struct Provenance {
  std::string generator = "unknown";
  std::string rng = kRngName;
  std::uint64_t seed = 0;
  std::optional<double> r_requested;
  std::optional<double> r_effective;
  /// insertion_order[i] is the 0-based step at which row i was added.
  std::optional<std::vector<std::size_t>> insertion_order;

  bool operator==(const Provenance&) const = default;
};

/// n points on the grid of `grid`, stored row-major as level indices.
///
/// Only grid membership is enforced here; the Latin hypercube property is
/// checked by validate_lhd so that arbitrary designs read from disk can still
/// be evaluated.
class Design {
 public:
  Design(GridSpec grid, std::vector<Level> levels, Provenance provenance = {})
      : grid_(grid), levels_(std::move(levels)), provenance_(std::move(provenance)) {
    if (levels_.size() != grid_.n() * grid_.d()) {
      throw std::invalid_argument("design needs n*d = " + std::to_string(grid_.n() * grid_.d()) +
                                  " level indices, got " + std::to_string(levels_.size()));
    }
    for (Level v : levels_) {
      if (v >= grid_.n()) {
        throw std::invalid_argument("level index " + std::to_string(v) + " outside grid of " +
                                    std::to_string(grid_.n()) + " levels");
      }
    }
  }

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return grid_.n(); }
  std::size_t dim() const { return grid_.d(); }

  Level level(std::size_t i, std::size_t s) const { return levels_[i * grid_.d() + s]; }
  double coord(std::size_t i, std::size_t s) const { return grid_.value(level(i, s)); }
  std::span<const Level> row(std::size_t i) const {
    return {levels_.data() + i * grid_.d(), grid_.d()};
  }
  std::span<const Level> levels() const { return levels_; }

  const Provenance& provenance() const { return provenance_; }
  Provenance& provenance() { return provenance_; }

  /// Exchanges the level of points i and j in dimension s. Preserves the LHD property.
  void swap_levels(std::size_t s, std::size_t i, std::size_t j) {
    std::swap(levels_[i * grid_.d() + s], levels_[j * grid_.d() + s]);
  }

  /// Equality of the point sets; provenance is ignored.
  bool same_points(const Design& other) const {
    return grid_ == other.grid_ && levels_ == other.levels_;
  }

 private:
  GridSpec grid_;
  std::vector<Level> levels_;
  Provenance provenance_;
};

/// k <= n points on a grid, no level reused within a dimension.
class PartialDesign {
 public:
  explicit PartialDesign(GridSpec grid) : grid_(grid), used_(grid.n() * grid.d(), 0) {}

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return levels_.size() / grid_.d(); }
  std::size_t dim() const { return grid_.d(); }
  bool complete() const { return size() == grid_.n(); }

  Level level(std::size_t i, std::size_t s) const { return levels_[i * grid_.d() + s]; }
  double coord(std::size_t i, std::size_t s) const { return grid_.value(level(i, s)); }
  std::span<const Level> row(std::size_t i) const {
    return {levels_.data() + i * grid_.d(), grid_.d()};
  }

  bool used(std::size_t s, Level j) const { return used_[s * grid_.n() + j] != 0; }

  /// Appends a point; throws if it would reuse a level or the design is full.
  void add(std::span<const Level> point) {
    if (point.size() != grid_.d()) throw std::invalid_argument("point has wrong dimension");
    if (complete()) throw std::logic_error("partial design already holds n points");
    for (std::size_t s = 0; s < grid_.d(); ++s) {
      if (point[s] >= grid_.n()) throw std::invalid_argument("level outside grid");
      if (used(s, point[s])) {
        throw std::invalid_argument("level " + std::to_string(point[s]) + " already used in dimension " +
                                    std::to_string(s + 1));
      }
    }
    for (std::size_t s = 0; s < grid_.d(); ++s) used_[s * grid_.n() + point[s]] = 1;
    levels_.insert(levels_.end(), point.begin(), point.end());
  }

  void clear() {
    levels_.clear();
    std::fill(used_.begin(), used_.end(), 0);
  }

  /// Completed design in insertion order; throws unless complete().
  Design to_design(Provenance provenance = {}) const {
    if (!complete()) throw std::logic_error("partial design is not complete");
    return Design(grid_, levels_, std::move(provenance));
  }

 private:
  GridSpec grid_;
  std::vector<Level> levels_;
  std::vector<std::uint8_t> used_;
};

/// Anything that exposes points on a grid: Design or PartialDesign.
template <typename T>
concept PointSet = requires(const T& t, std::size_t i) {
  { t.grid() } -> std::convertible_to<const GridSpec&>;
  { t.size() } -> std::convertible_to<std::size_t>;
  { t.dim() } -> std::convertible_to<std::size_t>;
  { t.row(i) } -> std::convertible_to<std::span<const Level>>;
};

/// Squared Euclidean distance in level units. Exact for any realistic grid.
inline std::int64_t squared_level_distance(std::span<const Level> a, std::span<const Level> b) {
  std::int64_t sum = 0;
  for (std::size_t s = 0; s < a.size(); ++s) {
    const std::int64_t diff = static_cast<std::int64_t>(a[s]) - static_cast<std::int64_t>(b[s]);
    sum += diff * diff;
  }
  return sum;
}

/// Random Latin hypercube: one independent uniform permutation per dimension.
inline Design random_lhd(const GridSpec& grid, std::uint64_t seed) {
  Rng rng(seed);
  const std::size_t n = grid.n();
  const std::size_t d = grid.d();
  std::vector<Level> perm(n);
  std::vector<Level> levels(n * d);
  for (std::size_t s = 0; s < d; ++s) {
    std::iota(perm.begin(), perm.end(), Level{0});
    shuffle(perm, rng);
    for (std::size_t i = 0; i < n; ++i) levels[i * d + s] = perm[i];
  }
  Provenance prov;
  prov.generator = "random_lhd";
  prov.seed = seed;
  return Design(grid, std::move(levels), std::move(prov));
}

struct LhdViolation {
  std::size_t dimension;  // 0-based
  std::vector<Level> duplicated;
  std::vector<Level> missing;
};

struct ValidityReport {
  std::vector<LhdViolation> violations;
  bool ok() const { return violations.empty(); }
};

inline std::string to_string(const LhdViolation& v) {
  auto join = [](const std::vector<Level>& xs) {
    std::string out;
    for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? "," : "") + std::to_string(xs[k]);
    return out;
  };
  std::string out = "dimension " + std::to_string(v.dimension + 1) + ":";
  if (!v.duplicated.empty()) out += " duplicated levels {" + join(v.duplicated) + "}";
  if (!v.missing.empty()) out += " missing levels {" + join(v.missing) + "}";
  return out;
}

inline ValidityReport validate_lhd(const Design& design) {
  ValidityReport report;
  const std::size_t n = design.size();
  std::vector<std::size_t> count(n);
  for (std::size_t s = 0; s < design.dim(); ++s) {
    std::fill(count.begin(), count.end(), 0);
    for (std::size_t i = 0; i < n; ++i) ++count[design.level(i, s)];
    LhdViolation v{s, {}, {}};
    for (std::size_t j = 0; j < n; ++j) {
      if (count[j] > 1) v.duplicated.push_back(static_cast<Level>(j));
      if (count[j] == 0) v.missing.push_back(static_cast<Level>(j));
    }
    if (!v.duplicated.empty() || !v.missing.empty()) report.violations.push_back(std::move(v));
  }
  return report;
}

/// Dense symmetric matrix of pairwise distances.
class DistanceMatrix {
 public:
  explicit DistanceMatrix(std::size_t size) : size_(size), values_(size * size, 0.0) {}

  std::size_t size() const { return size_; }
  double operator()(std::size_t i, std::size_t j) const { return values_[i * size_ + j]; }
  void set(std::size_t i, std::size_t j, double v) {
    values_[i * size_ + j] = v;
    values_[j * size_ + i] = v;
  }

 private:
  std::size_t size_;
  std::vector<double> values_;
};

/// L_p distance between rows of a point set, in [0, 1] units.
template <PointSet Points>
double lp_distance(const Points& points, std::size_t i, std::size_t j, double p = 2.0) {
  const auto a = points.row(i);
  const auto b = points.row(j);
  if (p == 2.0) return points.grid().to_unit(std::sqrt(static_cast<double>(squared_level_distance(a, b))));
  double sum = 0.0;
  if (p == 1.0) {
    for (std::size_t s = 0; s < a.size(); ++s) sum += a[s] > b[s] ? a[s] - b[s] : b[s] - a[s];
    return points.grid().to_unit(sum);
  }
  for (std::size_t s = 0; s < a.size(); ++s) {
    sum += std::pow(std::abs(static_cast<double>(a[s]) - static_cast<double>(b[s])), p);
  }
  return points.grid().to_unit(std::pow(sum, 1.0 / p));
}

template <PointSet Points>
DistanceMatrix pairwise_distances(const Points& points, double p = 2.0) {
  if (!(p >= 1.0)) throw std::invalid_argument("distance order p must be >= 1");
  if (points.size() == 0) throw std::invalid_argument("pairwise distances need at least one point");
  DistanceMatrix out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = i + 1; j < points.size(); ++j) out.set(i, j, lp_distance(points, i, j, p));
  }
  return out;
}

}  // namespace lhd
