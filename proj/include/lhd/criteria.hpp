#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lhd/design.hpp"
#include "lhd/error.hpp"

namespace lhd {

enum class Criterion { maximin, audze_eglais, centered_l2 };
enum class Direction { maximize, minimize };

inline std::string_view to_string(Criterion c) {
  switch (c) {
    case Criterion::maximin: return "maximin";
    case Criterion::audze_eglais: return "audze_eglais";
    case Criterion::centered_l2: return "centered_l2";
  }
  return "?";
}

inline Criterion parse_criterion(std::string_view name) {
  if (name == "maximin") return Criterion::maximin;
  if (name == "audze_eglais") return Criterion::audze_eglais;
  if (name == "centered_l2") return Criterion::centered_l2;
  throw std::invalid_argument("unknown criterion '" + std::string(name) + "'");
}

inline Direction direction_of(Criterion c) {
  return c == Criterion::maximin ? Direction::maximize : Direction::minimize;
}

struct CriterionValue {
  Criterion name;
  double value;
  Direction direction;
  /// maximin only: the closest pair, lexicographically first on ties.
  std::optional<std::pair<std::size_t, std::size_t>> argmin;
  /// centered_l2 only: the squared discrepancy.
  std::optional<double> squared;
};

/// Type-7 sample quantile: linear interpolation at position (m - 1) * alpha
/// of the sorted sample. `sorted` must be ascending and nonempty.
inline double quantile_sorted(const std::vector<double>& sorted, double alpha) {
  if (sorted.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("quantile level must lie in [0, 1]");
  const double h = static_cast<double>(sorted.size() - 1) * alpha;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

/// Nearest-neighbour distances r_i and their quantiles.
class NNDistanceSummary {
 public:
  explicit NNDistanceSummary(std::vector<double> nn) : nn_(std::move(nn)), sorted_(nn_) {
    std::sort(sorted_.begin(), sorted_.end());
  }

  const std::vector<double>& nn() const { return nn_; }
  double quantile(double alpha) const { return quantile_sorted(sorted_, alpha); }
  double min_interpoint() const { return sorted_.front(); }

 private:
  std::vector<double> nn_;
  std::vector<double> sorted_;
};

/// Squared nearest-neighbour distance of every point, in level units.
template <PointSet Points>
std::vector<std::int64_t> nn_squared_levels(const Points& points) {
  const std::size_t n = points.size();
  std::vector<std::int64_t> best(n, std::numeric_limits<std::int64_t>::max());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t dist = squared_level_distance(points.row(i), points.row(j));
      best[i] = std::min(best[i], dist);
      best[j] = std::min(best[j], dist);
    }
  }
  return best;
}

template <PointSet Points>
NNDistanceSummary nn_summary(const Points& points) {
  if (points.size() < 2) throw UndefinedCriterionError("nearest-neighbour distances need at least 2 points");
  const auto sq = nn_squared_levels(points);
  std::vector<double> nn(sq.size());
  for (std::size_t i = 0; i < sq.size(); ++i) {
    nn[i] = points.grid().to_unit(std::sqrt(static_cast<double>(sq[i])));
  }
  return NNDistanceSummary(std::move(nn));
}

/// Minimum L_p distance over distinct pairs (larger is better).
template <PointSet Points>
CriterionValue maximin(const Points& points, double p = 2.0) {
  if (!(p >= 1.0)) throw std::invalid_argument("distance order p must be >= 1");
  const std::size_t n = points.size();
  if (n < 2) throw UndefinedCriterionError("maximin needs at least 2 points");
  std::pair<std::size_t, std::size_t> arg{0, 1};
  double value = 0.0;
  if (p == 2.0) {
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const std::int64_t dist = squared_level_distance(points.row(i), points.row(j));
        if (dist < best) {
          best = dist;
          arg = {i, j};
        }
      }
    }
    value = points.grid().to_unit(std::sqrt(static_cast<double>(best)));
  } else {
    value = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dist = lp_distance(points, i, j, p);
        if (dist < value) {
          value = dist;
          arg = {i, j};
        }
      }
    }
  }
  return {Criterion::maximin, value, Direction::maximize, arg, std::nullopt};
}

/// One Audze-Eglais term, 1 / ||x_i - x_j||^2, from a squared level distance.
inline double audze_eglais_term(std::int64_t squared_levels, std::size_t n) {
  const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 1);
  return scale / static_cast<double>(squared_levels);
}

/// Sum of inverse squared Euclidean distances over unordered pairs (smaller is better).
/// Pairs are summed in (i, j) lexicographic order.
template <PointSet Points>
CriterionValue audze_eglais(const Points& points) {
  const std::size_t n = points.size();
  if (n < 2) throw UndefinedCriterionError("Audze-Eglais needs at least 2 points");
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::int64_t dist = squared_level_distance(points.row(i), points.row(j));
      if (dist == 0) throw SingularCriterionError(i, j);
      total += audze_eglais_term(dist, n);
    }
  }
  return {Criterion::audze_eglais, total, Direction::minimize, std::nullopt, std::nullopt};
}

namespace detail {

/// Per-coordinate factor of the single-point term of CD2^2.
inline double cd_point_factor(double x) {
  const double c = std::abs(x - 0.5);
  return 1.0 + 0.5 * c - 0.5 * c * c;
}

/// Per-coordinate factor of the pair term of CD2^2.
inline double cd_pair_factor(double x, double y) {
  return 1.0 + 0.5 * std::abs(x - 0.5) + 0.5 * std::abs(y - 0.5) - 0.5 * std::abs(x - y);
}

template <PointSet Points>
double cd_point_product(const Points& points, std::size_t i) {
  double prod = 1.0;
  for (std::size_t s = 0; s < points.dim(); ++s) prod *= cd_point_factor(points.grid().value(points.row(i)[s]));
  return prod;
}

template <PointSet Points>
double cd_pair_product(const Points& points, std::size_t i, std::size_t j) {
  const auto& grid = points.grid();
  const auto a = points.row(i);
  const auto b = points.row(j);
  double prod = 1.0;
  for (std::size_t s = 0; s < points.dim(); ++s) prod *= cd_pair_factor(grid.value(a[s]), grid.value(b[s]));
  return prod;
}

/// Combines the three terms of CD2^2. `point_sum` is the sum of point products
/// and `pair_sum` the full double sum (both orders plus the diagonal).
inline double cd_squared_from_sums(std::size_t n, std::size_t d, double point_sum, double pair_sum) {
  const double nd = static_cast<double>(n);
  return std::pow(13.0 / 12.0, static_cast<double>(d)) - 2.0 / nd * point_sum + pair_sum / (nd * nd);
}

}  // namespace detail

/// Centered L2 discrepancy (Hickernell's closed form). `value` is CD2,
/// `squared` is CD2^2 (smaller is better).
template <PointSet Points>
CriterionValue centered_l2_discrepancy(const Points& points) {
  const std::size_t n = points.size();
  if (n < 1) throw UndefinedCriterionError("discrepancy needs at least 1 point");
  double point_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) point_sum += detail::cd_point_product(points, i);
  double pair_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) pair_sum += detail::cd_pair_product(points, i, j);
  }
  const double squared = std::max(0.0, detail::cd_squared_from_sums(n, points.dim(), point_sum, pair_sum));
  return {Criterion::centered_l2, std::sqrt(squared), Direction::minimize, std::nullopt, squared};
}

template <PointSet Points>
CriterionValue evaluate(const Points& points, Criterion criterion) {
  switch (criterion) {
    case Criterion::maximin: return maximin(points);
    case Criterion::audze_eglais: return audze_eglais(points);
    case Criterion::centered_l2: return centered_l2_discrepancy(points);
  }
  throw std::invalid_argument("unknown criterion");
}

}  // namespace lhd
