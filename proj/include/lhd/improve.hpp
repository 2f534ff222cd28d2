#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "lhd/criteria.hpp"
#include "lhd/design.hpp"
#include "lhd/rng.hpp"

namespace lhd {

/// Exchange of the levels of points i and j in one dimension.
struct SwapMove {
  std::size_t dimension = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  /// Criterion change caused by the move (new minus old).
  double effect = 0.0;
};

struct SearchTraceEntry {
  /// Number of moves evaluated when the entry was recorded.
  std::size_t evaluation = 0;
  SwapMove move;
  double value = 0.0;
};

struct SearchResult {
  Design design;
  Criterion criterion = Criterion::maximin;
  double initial_value = 0.0;
  double final_value = 0.0;
  std::size_t evaluated = 0;
  std::size_t accepted = 0;
  /// True when a full pass over the neighbourhood found no improving move.
  bool local_optimum = false;
  /// Criterion value after every accepted move (annealing: every new best).
  std::vector<SearchTraceEntry> trace;
};

namespace detail {

/// Incremental maximin under swaps. The score is the pair (minimum squared
/// level distance, number of pairs at that minimum); a move improves when it
/// raises the minimum, or keeps it and removes closest pairs.
class MaximinSwapEvaluator {
 public:
  struct Score {
    std::int64_t min_sq = 0;
    std::size_t count = 0;
  };

  explicit MaximinSwapEvaluator(Design design)
      : design_(std::move(design)), n_(design_.size()), dist_(n_ * n_, 0), row_i_(n_), row_j_(n_) {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = a + 1; b < n_; ++b) {
        const auto v = squared_level_distance(design_.row(a), design_.row(b));
        dist_[a * n_ + b] = v;
        dist_[b * n_ + a] = v;
      }
    }
    score_ = full_scan(n_, n_);
  }

  const Design& design() const { return design_; }
  Score score() const { return score_; }
  double value(Score s) const { return design_.grid().to_unit(std::sqrt(static_cast<double>(s.min_sq))); }
  double energy(Score s) const { return -value(s); }
  static bool improves(Score cand, Score cur) {
    return cand.min_sq > cur.min_sq || (cand.min_sq == cur.min_sq && cand.count < cur.count);
  }

  Score trial(std::size_t s, std::size_t i, std::size_t j) {
    const auto li = static_cast<std::int64_t>(design_.level(i, s));
    const auto lj = static_cast<std::int64_t>(design_.level(j, s));
    std::size_t affected_at_min = 0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      const auto lk = static_cast<std::int64_t>(design_.level(k, s));
      const std::int64_t di = dist_[i * n_ + k];
      const std::int64_t dj = dist_[j * n_ + k];
      row_i_[k] = di - (li - lk) * (li - lk) + (lj - lk) * (lj - lk);
      row_j_[k] = dj - (lj - lk) * (lj - lk) + (li - lk) * (li - lk);
      affected_at_min += (di == score_.min_sq) + (dj == score_.min_sq);
    }
    Score out;
    if (score_.count > affected_at_min) {
      out = {score_.min_sq, score_.count - affected_at_min};
    } else {
      out = full_scan(i, j);
    }
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      merge(out, row_i_[k]);
      merge(out, row_j_[k]);
    }
    return out;
  }

  /// Applies the move last passed to trial().
  void commit(std::size_t s, std::size_t i, std::size_t j, Score score) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      dist_[i * n_ + k] = dist_[k * n_ + i] = row_i_[k];
      dist_[j * n_ + k] = dist_[k * n_ + j] = row_j_[k];
    }
    design_.swap_levels(s, i, j);
    score_ = score;
  }

 private:
  static void merge(Score& acc, std::int64_t v) {
    if (v < acc.min_sq) {
      acc = {v, 1};
    } else if (v == acc.min_sq) {
      ++acc.count;
    }
  }

  /// Min and count over all pairs that involve neither skip_a nor skip_b,
  /// plus the pair (skip_a, skip_b) itself when both are real points.
  Score full_scan(std::size_t skip_a, std::size_t skip_b) const {
    Score acc{std::numeric_limits<std::int64_t>::max(), 0};
    for (std::size_t a = 0; a < n_; ++a) {
      if (a == skip_a || a == skip_b) continue;
      for (std::size_t b = a + 1; b < n_; ++b) {
        if (b == skip_a || b == skip_b) continue;
        merge(acc, dist_[a * n_ + b]);
      }
    }
    if (skip_a < n_ && skip_b < n_) merge(acc, dist_[skip_a * n_ + skip_b]);
    return acc;
  }

  Design design_;
  std::size_t n_;
  std::vector<std::int64_t> dist_;
  std::vector<std::int64_t> row_i_;
  std::vector<std::int64_t> row_j_;
  Score score_;
};

/// Relative margin a minimised criterion must drop by to count as improved;
/// keeps accepted moves monotone after exact recomputation.
inline constexpr double kRelativeImprovement = 1e-12;

class AudzeEglaisSwapEvaluator {
 public:
  using Score = double;

  explicit AudzeEglaisSwapEvaluator(Design design)
      : design_(std::move(design)), n_(design_.size()), dist_(n_ * n_, 0), row_i_(n_), row_j_(n_) {
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = a + 1; b < n_; ++b) {
        const auto v = squared_level_distance(design_.row(a), design_.row(b));
        dist_[a * n_ + b] = v;
        dist_[b * n_ + a] = v;
      }
    }
    total_ = audze_eglais(design_).value;
  }

  const Design& design() const { return design_; }
  Score score() const { return total_; }
  double value(Score s) const { return s; }
  double energy(Score s) const { return s; }
  static bool improves(Score cand, Score cur) {
    return cand < cur - kRelativeImprovement * std::max(1.0, std::abs(cur));
  }

  Score trial(std::size_t s, std::size_t i, std::size_t j) {
    const auto li = static_cast<std::int64_t>(design_.level(i, s));
    const auto lj = static_cast<std::int64_t>(design_.level(j, s));
    double delta = 0.0;
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      const auto lk = static_cast<std::int64_t>(design_.level(k, s));
      const std::int64_t di = dist_[i * n_ + k];
      const std::int64_t dj = dist_[j * n_ + k];
      row_i_[k] = di - (li - lk) * (li - lk) + (lj - lk) * (lj - lk);
      row_j_[k] = dj - (lj - lk) * (lj - lk) + (li - lk) * (li - lk);
      if (row_i_[k] == 0 || row_j_[k] == 0) return std::numeric_limits<double>::infinity();
      delta += audze_eglais_term(row_i_[k], n_) - audze_eglais_term(di, n_) + audze_eglais_term(row_j_[k], n_) -
               audze_eglais_term(dj, n_);
    }
    return total_ + delta;
  }

  void commit(std::size_t s, std::size_t i, std::size_t j, Score) {
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      dist_[i * n_ + k] = dist_[k * n_ + i] = row_i_[k];
      dist_[j * n_ + k] = dist_[k * n_ + j] = row_j_[k];
    }
    design_.swap_levels(s, i, j);
    // Same pair order as audze_eglais(), so the value matches it exactly.
    double total = 0.0;
    for (std::size_t a = 0; a < n_; ++a) {
      for (std::size_t b = a + 1; b < n_; ++b) total += audze_eglais_term(dist_[a * n_ + b], n_);
    }
    total_ = total;
  }

 private:
  Design design_;
  std::size_t n_;
  std::vector<std::int64_t> dist_;
  std::vector<std::int64_t> row_i_;
  std::vector<std::int64_t> row_j_;
  double total_ = 0.0;
};

/// Incremental centered L2 discrepancy, scored in squared form.
class CenteredL2SwapEvaluator {
 public:
  using Score = double;

  explicit CenteredL2SwapEvaluator(Design design)
      : design_(std::move(design)), n_(design_.size()), point_(n_), pair_(n_ * n_) {
    for (std::size_t a = 0; a < n_; ++a) {
      point_[a] = cd_point_product(design_, a);
      for (std::size_t b = 0; b < n_; ++b) pair_[a * n_ + b] = cd_pair_product(design_, a, b);
    }
    squared_ = recompute();
  }

  const Design& design() const { return design_; }
  Score score() const { return squared_; }
  double value(Score s) const { return std::sqrt(s); }
  double energy(Score s) const { return s; }
  static bool improves(Score cand, Score cur) {
    return cand < cur - kRelativeImprovement * std::max(1.0, std::abs(cur));
  }

  Score trial(std::size_t s, std::size_t i, std::size_t j) {
    const GridSpec& grid = design_.grid();
    const double xi = grid.value(design_.level(i, s));
    const double xj = grid.value(design_.level(j, s));
    const double nd = static_cast<double>(n_);
    // After the swap point i carries xj in dimension s and point j carries xi.
    const double pi_ratio = cd_point_factor(xj) / cd_point_factor(xi);
    const double delta_point = point_[i] * (pi_ratio - 1.0) + point_[j] * (1.0 / pi_ratio - 1.0);
    const double diag_ratio = cd_pair_factor(xj, xj) / cd_pair_factor(xi, xi);
    double delta_pair = pair_[i * n_ + i] * (diag_ratio - 1.0) + pair_[j * n_ + j] * (1.0 / diag_ratio - 1.0);
    for (std::size_t k = 0; k < n_; ++k) {
      if (k == i || k == j) continue;
      const double xk = grid.value(design_.level(k, s));
      const double fi = cd_pair_factor(xi, xk);
      const double fj = cd_pair_factor(xj, xk);
      delta_pair += 2.0 * (pair_[i * n_ + k] * (fj / fi - 1.0) + pair_[j * n_ + k] * (fi / fj - 1.0));
    }
    return squared_ - 2.0 / nd * delta_point + delta_pair / (nd * nd);
  }

  void commit(std::size_t s, std::size_t i, std::size_t j, Score) {
    design_.swap_levels(s, i, j);
    for (const std::size_t a : {i, j}) {
      point_[a] = cd_point_product(design_, a);
      for (std::size_t b = 0; b < n_; ++b) {
        pair_[a * n_ + b] = cd_pair_product(design_, a, b);
        pair_[b * n_ + a] = cd_pair_product(design_, b, a);
      }
    }
    squared_ = recompute();
  }

 private:
  // Summation order mirrors centered_l2_discrepancy().
  double recompute() const {
    double point_sum = 0.0;
    for (double v : point_) point_sum += v;
    double pair_sum = 0.0;
    for (double v : pair_) pair_sum += v;
    return std::max(0.0, cd_squared_from_sums(n_, design_.dim(), point_sum, pair_sum));
  }

  Design design_;
  std::size_t n_;
  std::vector<double> point_;
  std::vector<double> pair_;
  double squared_ = 0.0;
};

inline void check_searchable(const Design& design, Criterion criterion) {
  if (!validate_lhd(design).ok()) throw std::invalid_argument("improvement needs a valid Latin hypercube design");
  if (criterion != Criterion::centered_l2 && design.size() < 2) {
    throw UndefinedCriterionError("criterion needs at least 2 points");
  }
}

template <typename Evaluator>
SearchResult run_local_search(const Design& start, Criterion criterion, std::size_t budget, std::uint64_t seed) {
  Evaluator eval(start);
  SearchResult out{start, criterion, eval.value(eval.score()), eval.value(eval.score()), 0, 0, false, {}};
  const std::size_t n = start.size();
  const std::size_t d = start.dim();
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.emplace_back(static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j));
  }
  const std::size_t moves = pairs.size() * d;
  if (moves == 0 || budget == 0) {
    out.local_optimum = moves == 0;
    return out;
  }
  Rng rng(seed);
  std::vector<std::uint32_t> order(moves);
  std::size_t cursor = moves;
  // A move is stamped when it fails against the current design; the design is
  // a local optimum once every move carries the current stamp.
  std::vector<std::uint32_t> stamp(moves, 0);
  std::uint32_t version = 1;
  std::size_t failed = 0;
  while (out.evaluated < budget) {
    if (cursor == moves) {
      for (std::size_t m = 0; m < moves; ++m) order[m] = static_cast<std::uint32_t>(m);
      shuffle(order, rng);
      cursor = 0;
    }
    const std::size_t m = order[cursor++];
    const std::size_t s = m / pairs.size();
    const auto [i, j] = pairs[m % pairs.size()];
    ++out.evaluated;
    const auto before = eval.score();
    const auto cand = eval.trial(s, i, j);
    if (Evaluator::improves(cand, before)) {
      eval.commit(s, i, j, cand);
      ++out.accepted;
      ++version;
      failed = 0;
      const double v = eval.value(eval.score());
      out.trace.push_back({out.evaluated, {s, i, j, v - eval.value(before)}, v});
    } else if (stamp[m] != version) {
      stamp[m] = version;
      if (++failed == moves) {
        out.local_optimum = true;
        break;
      }
    }
  }
  out.design = eval.design();
  out.final_value = eval.value(eval.score());
  return out;
}

}  // namespace detail

/// First-improvement local search over single-dimension level swaps, visiting
/// moves in a random order that is reshuffled after every full pass. Stops
/// after `budget` evaluated moves or when a whole pass finds no improvement.
/// maximin never decreases; the minimised criteria never increase.
inline SearchResult local_search(const Design& design, Criterion criterion, std::size_t budget, std::uint64_t seed) {
  detail::check_searchable(design, criterion);
  switch (criterion) {
    case Criterion::maximin:
      return detail::run_local_search<detail::MaximinSwapEvaluator>(design, criterion, budget, seed);
    case Criterion::audze_eglais:
      return detail::run_local_search<detail::AudzeEglaisSwapEvaluator>(design, criterion, budget, seed);
    case Criterion::centered_l2:
      return detail::run_local_search<detail::CenteredL2SwapEvaluator>(design, criterion, budget, seed);
  }
  throw std::invalid_argument("unknown criterion");
}

struct AnnealingConfig {
  std::size_t budget = 10000;
  /// Starting temperature as a fraction of |energy| of the input design.
  double initial_temperature = 0.01;
  /// Temperature at the end of the budget relative to the start.
  double final_temperature_ratio = 1e-3;
  std::uint64_t seed = 0;
};

namespace detail {

template <typename Evaluator>
SearchResult run_annealing(const Design& start, Criterion criterion, const AnnealingConfig& config) {
  Evaluator eval(start);
  SearchResult out{start, criterion, eval.value(eval.score()), eval.value(eval.score()), 0, 0, false, {}};
  const std::size_t n = start.size();
  if (n < 2 || config.budget == 0) return out;
  Rng rng(config.seed);
  auto best = eval.score();
  double temperature = config.initial_temperature * std::max(std::abs(eval.energy(best)), 1e-12);
  const double cooling = std::pow(config.final_temperature_ratio, 1.0 / static_cast<double>(config.budget));
  for (; out.evaluated < config.budget; temperature *= cooling) {
    const auto s = static_cast<std::size_t>(uniform_below(rng, start.dim()));
    const auto i = static_cast<std::size_t>(uniform_below(rng, n));
    auto j = static_cast<std::size_t>(uniform_below(rng, n - 1));
    if (j >= i) ++j;
    ++out.evaluated;
    const auto cur = eval.score();
    const auto cand = eval.trial(s, i, j);
    const double delta = eval.energy(cand) - eval.energy(cur);
    const bool accept =
        Evaluator::improves(cand, cur) || delta <= 0.0 || uniform01(rng) < std::exp(-delta / temperature);
    if (!accept) continue;
    eval.commit(s, i, j, cand);
    ++out.accepted;
    if (Evaluator::improves(eval.score(), best)) {
      best = eval.score();
      out.design = eval.design();
      const double v = eval.value(best);
      out.trace.push_back({out.evaluated, {s, i, j, v - out.final_value}, v});
      out.final_value = v;
    }
  }
  return out;
}

}  // namespace detail

/// Simulated annealing over the same swap moves with Metropolis acceptance
/// and geometric cooling. Returns the best design seen, so the result is
/// never worse than the input.
inline SearchResult simulated_annealing(const Design& design, Criterion criterion, const AnnealingConfig& config) {
  detail::check_searchable(design, criterion);
  if (!(config.initial_temperature > 0.0)) throw std::invalid_argument("initial temperature must be positive");
  if (!(config.final_temperature_ratio > 0.0 && config.final_temperature_ratio <= 1.0)) {
    throw std::invalid_argument("final temperature ratio must lie in (0, 1]");
  }
  switch (criterion) {
    case Criterion::maximin: return detail::run_annealing<detail::MaximinSwapEvaluator>(design, criterion, config);
    case Criterion::audze_eglais:
      return detail::run_annealing<detail::AudzeEglaisSwapEvaluator>(design, criterion, config);
    case Criterion::centered_l2:
      return detail::run_annealing<detail::CenteredL2SwapEvaluator>(design, criterion, config);
  }
  throw std::invalid_argument("unknown criterion");
}

}  // namespace lhd
