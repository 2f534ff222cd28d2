#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lhd/criteria.hpp"
#include "lhd/design.hpp"
#include "lhd/error.hpp"
#include "lhd/montecarlo.hpp"
#include "lhd/rng.hpp"

namespace lhd {

/// Which levels each dimension of a partial design already occupies (the
/// d x n boolean matrix B), with per-level column sums and the free levels of
/// every dimension kept sorted.
class LevelUsage {
 public:
  explicit LevelUsage(const GridSpec& grid)
      : n_(grid.n()), d_(grid.d()), used_(grid.n() * grid.d(), 0), column_sums_(grid.n(), 0), free_(grid.d()) {
    for (auto& f : free_) {
      f.resize(n_);
      for (std::size_t j = 0; j < n_; ++j) f[j] = static_cast<Level>(j);
    }
  }

  /// Rebuilds B from scratch.
  static LevelUsage from(const PartialDesign& partial) {
    LevelUsage usage(partial.grid());
    for (std::size_t i = 0; i < partial.size(); ++i) usage.mark(partial.row(i));
    return usage;
  }

  std::size_t n() const { return n_; }
  std::size_t d() const { return d_; }
  bool used(std::size_t s, Level j) const { return used_[s * n_ + j] != 0; }
  const std::vector<std::size_t>& column_sums() const { return column_sums_; }
  std::span<const Level> free_levels(std::size_t s) const { return free_[s]; }

  std::size_t m_star() const { return *std::min_element(column_sums_.begin(), column_sums_.end()); }

  std::size_t count_at_min() const {
    const std::size_t m = m_star();
    return static_cast<std::size_t>(std::count(column_sums_.begin(), column_sums_.end(), m));
  }

  void mark(std::span<const Level> point) {
    for (std::size_t s = 0; s < d_; ++s) {
      if (used(s, point[s])) throw std::logic_error("level already used");
    }
    for (std::size_t s = 0; s < d_; ++s) {
      used_[s * n_ + point[s]] = 1;
      ++column_sums_[point[s]];
      auto& f = free_[s];
      f.erase(std::lower_bound(f.begin(), f.end(), point[s]));
    }
  }

  /// Number of levels attaining the minimal column sum once `point` is added.
  std::size_t minimal_columns_after(std::span<const Level> point) const {
    std::vector<std::size_t> sums = column_sums_;
    for (std::size_t s = 0; s < d_; ++s) ++sums[point[s]];
    const std::size_t m = *std::min_element(sums.begin(), sums.end());
    return static_cast<std::size_t>(std::count(sums.begin(), sums.end(), m));
  }

  /// Free level of dimension s nearest to `target` (in level units); ties go
  /// to the level closer to the grid centre, then to the lower level.
  Level nearest_free(std::size_t s, double target) const {
    const auto& f = free_[s];
    if (f.empty()) throw ExhaustedLevelsError(s);
    auto it = std::lower_bound(f.begin(), f.end(), target,
                               [](Level lv, double t) { return static_cast<double>(lv) < t; });
    if (it == f.begin()) return f.front();
    if (it == f.end()) return f.back();
    const Level hi = *it;
    const Level lo = *(it - 1);
    const double dlo = target - static_cast<double>(lo);
    const double dhi = static_cast<double>(hi) - target;
    if (dlo < dhi) return lo;
    if (dhi < dlo) return hi;
    const double centre = static_cast<double>(n_ - 1) / 2.0;
    return std::abs(static_cast<double>(hi) - centre) < std::abs(static_cast<double>(lo) - centre) ? hi : lo;
  }

  bool operator==(const LevelUsage& other) const {
    return n_ == other.n_ && d_ == other.d_ && used_ == other.used_ && column_sums_ == other.column_sums_ &&
           free_ == other.free_;
  }

 private:
  std::size_t n_;
  std::size_t d_;
  std::vector<std::uint8_t> used_;
  std::vector<std::size_t> column_sums_;
  std::vector<std::vector<Level>> free_;
};

struct SlhdConfig {
  double r = 0.1;
  std::size_t max_attempts_per_point = 30;
  /// Relative shrink applied to r after max_attempts_per_point failures.
  double r_decrement = 0.05;
  /// Half-width of the band around 0.5 for the centred coordinate of z.
  double center_band = 0.15;
  std::uint64_t seed = 0;
  /// Full restarts from a new seed point allowed at the requested r before
  /// stalls start shrinking r.
  std::size_t restarts = 30;
  /// Start over from a new seed point on every decrement instead of keeping
  /// the partial design.
  bool restart_on_decrement = false;
  /// Construction fails once r drops below this fraction of the requested r.
  double r_floor_fraction = 0.01;

  void validate() const {
    if (!(r > 0.0) || !std::isfinite(r)) throw std::invalid_argument("r must be positive");
    if (max_attempts_per_point == 0) throw std::invalid_argument("max_attempts_per_point must be >= 1");
    if (!(r_decrement > 0.0 && r_decrement < 1.0)) throw std::invalid_argument("r_decrement must lie in (0, 1)");
    if (!(center_band > 0.0 && center_band <= 0.5)) throw std::invalid_argument("center_band must lie in (0, 0.5]");
    if (!(r_floor_fraction > 0.0 && r_floor_fraction < 1.0)) {
      throw std::invalid_argument("r_floor_fraction must lie in (0, 1)");
    }
  }
};

/// One accepted insertion.
struct InsertionRecord {
  std::size_t step = 0;
  /// Candidate-generation rounds spent on this point (including failed ones).
  std::size_t attempts = 0;
  /// r in force when the point was accepted.
  double r = 0.0;
  std::size_t decrements = 0;
  std::size_t candidates = 0;
  std::size_t feasible = 0;
  std::size_t degenerate_directions = 0;
  Point point;
  /// Distance to the nearest earlier point; infinity for the first point.
  double nn_distance = std::numeric_limits<double>::infinity();
};

struct SlhdResult {
  Design design;
  double r_requested = 0.0;
  double r_effective = 0.0;
  std::size_t attempts = 0;
  std::size_t decrements = 0;
  std::size_t restarts = 0;
  std::vector<InsertionRecord> log;
};

class ConstructionFailedError : public Error {
 public:
  ConstructionFailedError(const std::string& what, PartialDesign partial_design, std::vector<InsertionRecord> log_,
                          double last_r)
      : Error(what), partial(std::move(partial_design)), log(std::move(log_)), r_last(last_r) {}

  PartialDesign partial;
  std::vector<InsertionRecord> log;
  double r_last;
};

/// Smallest squared level distance whose unit distance is strictly greater
/// than r. Feasibility tests compare integers against this, and agree exactly
/// with a post-hoc check of `distance > r`.
inline std::int64_t exclusion_threshold(const GridSpec& grid, double r) {
  const double scaled = r * static_cast<double>(grid.n() - 1);
  auto dist = static_cast<std::int64_t>(std::floor(scaled * scaled)) - 2;
  if (dist < 0) dist = 0;
  while (!(grid.to_unit(std::sqrt(static_cast<double>(dist))) > r)) ++dist;
  return dist;
}

/// First point: pairwise distinct levels drawn from the central half of the
/// grid, [ceil((n-1)/4), floor(3(n-1)/4)], or from the whole grid when that
/// band holds fewer than d levels.
inline Point seed_point(const GridSpec& grid, Rng& rng) {
  const std::size_t n = grid.n();
  const std::size_t d = grid.d();
  if (d > n) {
    throw InfeasibleSeedError("cannot pick " + std::to_string(d) + " distinct levels from " + std::to_string(n));
  }
  std::size_t lo = (n - 1 + 3) / 4;
  std::size_t hi = 3 * (n - 1) / 4;
  if (hi < lo || hi - lo + 1 < d) {
    lo = 0;
    hi = n - 1;
  }
  std::vector<Level> band(hi - lo + 1);
  for (std::size_t k = 0; k < band.size(); ++k) band[k] = static_cast<Level>(lo + k);
  // Partial Fisher-Yates: the first d entries become a uniform draw without replacement.
  for (std::size_t k = 0; k < d; ++k) {
    const auto j = k + static_cast<std::size_t>(uniform_below(rng, band.size() - k));
    std::swap(band[k], band[j]);
  }
  return Point(band.begin(), band.begin() + static_cast<std::ptrdiff_t>(d));
}

/// Random target point with every coordinate on a free level; one uniformly
/// chosen coordinate is drawn from the free levels within center_band of 0.5
/// (falling back to the free level nearest 0.5).
inline Point draw_z(const GridSpec& grid, const LevelUsage& usage, Rng& rng, double center_band) {
  const std::size_t d = grid.d();
  for (std::size_t s = 0; s < d; ++s) {
    if (usage.free_levels(s).empty()) throw ExhaustedLevelsError(s);
  }
  const auto centred = static_cast<std::size_t>(uniform_below(rng, d));
  Point z(d);
  std::vector<Level> band;
  for (std::size_t s = 0; s < d; ++s) {
    const auto free = usage.free_levels(s);
    if (s != centred) {
      z[s] = free[uniform_below(rng, free.size())];
      continue;
    }
    band.clear();
    for (Level lv : free) {
      if (std::abs(grid.value(lv) - 0.5) <= center_band + 1e-12) band.push_back(lv);
    }
    if (!band.empty()) {
      z[s] = band[uniform_below(rng, band.size())];
    } else {
      z[s] = usage.nearest_free(s, static_cast<double>(grid.n() - 1) / 2.0);
    }
  }
  return z;
}

struct CandidateSetStats {
  std::size_t degenerate_directions = 0;
};

/// Candidate set C: z itself plus, for each placed point x_j, the nearest and
/// farthest points of the sphere of radius r about x_j along the ray towards
/// z, each snapped coordinatewise to the nearest free level. Sorted and
/// deduplicated.
inline std::vector<Point> candidate_set(const Point& z, const PartialDesign& partial, const LevelUsage& usage,
                                        double r, Rng& rng, CandidateSetStats* stats = nullptr) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  const GridSpec& grid = partial.grid();
  const std::size_t d = grid.d();
  const double r_levels = r * static_cast<double>(grid.n() - 1);
  std::vector<Point> out;
  out.reserve(2 * partial.size() + 1);
  out.push_back(z);
  std::vector<double> dir(d);
  for (std::size_t j = 0; j < partial.size(); ++j) {
    const auto x = partial.row(j);
    double norm2 = 0.0;
    for (std::size_t s = 0; s < d; ++s) {
      dir[s] = static_cast<double>(z[s]) - static_cast<double>(x[s]);
      norm2 += dir[s] * dir[s];
    }
    if (norm2 == 0.0) {
      if (stats) ++stats->degenerate_directions;
      while (norm2 == 0.0) {
        norm2 = 0.0;
        for (std::size_t s = 0; s < d; ++s) {
          dir[s] = standard_normal(rng);
          norm2 += dir[s] * dir[s];
        }
      }
    }
    const double scale = r_levels / std::sqrt(norm2);
    for (const double sign : {1.0, -1.0}) {
      Point p(d);
      for (std::size_t s = 0; s < d; ++s) {
        p[s] = usage.nearest_free(s, static_cast<double>(x[s]) + sign * scale * dir[s]);
      }
      out.push_back(std::move(p));
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

struct Selection {
  Point point;
  /// Levels at minimal column sum after adding the point (the tie-break score).
  std::size_t minimal_columns = 0;
  /// Squared distance to the nearest placed point, in level units.
  std::int64_t nearest_squared = 0;
  std::size_t feasible = 0;
};

/// Picks x* from C: it must lie strictly farther than r from every placed
/// point. Among several, minimise the number of levels at minimal column sum
/// in B(L_k + x*), then prefer the smaller clearance (tighter packing at r),
/// then the lexicographically smallest levels.
inline std::optional<Selection> select_candidate(const std::vector<Point>& candidates, const PartialDesign& partial,
                                                 const LevelUsage& usage, double r) {
  const std::int64_t threshold = exclusion_threshold(partial.grid(), r);
  std::optional<Selection> best;
  std::size_t feasible = 0;
  for (const Point& c : candidates) {
    std::int64_t nearest = std::numeric_limits<std::int64_t>::max();
    bool ok = true;
    for (std::size_t j = 0; j < partial.size(); ++j) {
      const std::int64_t dist = squared_level_distance(c, partial.row(j));
      if (dist < threshold) {
        ok = false;
        break;
      }
      nearest = std::min(nearest, dist);
    }
    if (!ok) continue;
    ++feasible;
    const std::size_t score = usage.minimal_columns_after(c);
    const bool better = !best || score < best->minimal_columns ||
                        (score == best->minimal_columns &&
                         (nearest < best->nearest_squared || (nearest == best->nearest_squared && c < best->point)));
    if (better) best = Selection{c, score, nearest, 0};
  }
  if (best) best->feasible = feasible;
  return best;
}

/// Greedy SLHD growth: start from a central seed point and repeatedly add a
/// candidate farther than r from all placed points. After
/// max_attempts_per_point failed rounds the run either restarts from scratch
/// (while `restarts` remain) or shrinks r by r_decrement, keeping the partial
/// design unless restart_on_decrement is set.
inline SlhdResult slhd_construct(const GridSpec& grid, const SlhdConfig& config) {
  config.validate();
  if (grid.n() < 2) throw std::invalid_argument("SLHD needs n >= 2");
  if (grid.d() > grid.n()) {
    throw InfeasibleSeedError("SLHD needs n >= d (n=" + std::to_string(grid.n()) + ", d=" +
                              std::to_string(grid.d()) + ")");
  }
  Rng rng(config.seed);
  const double floor_r = config.r * config.r_floor_fraction;
  double r = config.r;

  PartialDesign partial(grid);
  LevelUsage usage(grid);
  std::vector<InsertionRecord> log;
  std::size_t total_attempts = 0;
  std::size_t decrements = 0;
  std::size_t restarts = 0;

  auto place_seed = [&] {
    Point first = seed_point(grid, rng);
    partial.add(first);
    usage.mark(first);
    InsertionRecord rec;
    rec.step = 0;
    rec.r = r;
    rec.decrements = decrements;
    rec.point = std::move(first);
    log.push_back(std::move(rec));
  };
  place_seed();

  std::size_t attempts_here = 0;
  auto restart = [&] {
    ++restarts;
    partial.clear();
    usage = LevelUsage(grid);
    log.clear();
    attempts_here = 0;
    place_seed();
  };
  while (!partial.complete()) {
    std::optional<Selection> chosen;
    CandidateSetStats stats;
    std::size_t candidates = 0;
    std::size_t round = 0;
    for (; round < config.max_attempts_per_point && !chosen; ++round) {
      const Point z = draw_z(grid, usage, rng, config.center_band);
      const auto set = candidate_set(z, partial, usage, r, rng, &stats);
      candidates = set.size();
      chosen = select_candidate(set, partial, usage, r);
    }
    total_attempts += round;
    attempts_here += round;
    if (chosen) {
      InsertionRecord rec;
      rec.step = partial.size();
      rec.attempts = attempts_here;
      rec.r = r;
      rec.decrements = decrements;
      rec.candidates = candidates;
      rec.feasible = chosen->feasible;
      rec.degenerate_directions = stats.degenerate_directions;
      rec.nn_distance = grid.to_unit(std::sqrt(static_cast<double>(chosen->nearest_squared)));
      rec.point = chosen->point;
      partial.add(chosen->point);
      usage.mark(chosen->point);
      log.push_back(std::move(rec));
      attempts_here = 0;
      continue;
    }
    if (restarts < config.restarts) {
      restart();
      continue;
    }
    r *= 1.0 - config.r_decrement;
    ++decrements;
    if (r < floor_r) {
      throw ConstructionFailedError("SLHD construction failed at point " + std::to_string(partial.size() + 1) +
                                        " of " + std::to_string(grid.n()) + ": r fell below " +
                                        std::to_string(floor_r),
                                    partial, log, r);
    }
    if (config.restart_on_decrement) restart();
  }

  Provenance prov;
  prov.generator = "slhd";
  prov.seed = config.seed;
  prov.r_requested = config.r;
  prov.r_effective = r;
  std::vector<std::size_t> order(grid.n());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  prov.insertion_order = std::move(order);
  return SlhdResult{partial.to_design(std::move(prov)), config.r, r, total_attempts, decrements, restarts,
                    std::move(log)};
}

struct ScheduleOptions {
  std::size_t steps = 5;
  /// Relative radius increment between consecutive runs.
  double increment = 0.05;
  /// Random LHDs averaged to estimate the starting radius.
  std::size_t estimate_replications = 50;
  /// Starting radius; estimated from random LHDs when unset.
  std::optional<double> start_r;
  /// Stop climbing after the first run that had to shrink r.
  bool stop_when_unclean = true;
  /// Template for every run; r and seed are overwritten.
  SlhdConfig base;
};

struct ScheduleEntry {
  double r = 0.0;
  std::optional<SlhdResult> result;
  std::string failure;
  /// Achieved minimum inter-point distance; 0 on failure.
  double maximin = 0.0;
};

struct ScheduleResult {
  double start_r = 0.0;
  std::vector<ScheduleEntry> entries;
  /// Largest r completed without any decrement.
  std::optional<std::size_t> largest_clean;
  /// largest_clean when there is one, otherwise the completed run with the
  /// largest achieved minimum distance.
  std::optional<std::size_t> best;

  const SlhdResult* best_result() const { return best ? &*entries[*best].result : nullptr; }
};

/// Q_0.75 of nearest-neighbour distances, averaged over random LHDs.
inline double estimate_start_radius(const GridSpec& grid, std::uint64_t seed, std::size_t replications) {
  return random_lhd_quantile(grid, 0.75, replications, derive_seed(seed, 0x72616469757321ULL)).mean;
}

/// Runs slhd_construct at r = start * (1 + k * increment), k = 0..steps-1.
inline ScheduleResult radius_schedule(const GridSpec& grid, std::uint64_t seed, const ScheduleOptions& options = {}) {
  if (options.steps == 0) throw std::invalid_argument("schedule needs at least one step");
  if (!(options.increment >= 0.0)) throw std::invalid_argument("schedule increment must be >= 0");
  ScheduleResult out;
  out.start_r = options.start_r ? *options.start_r : estimate_start_radius(grid, seed, options.estimate_replications);
  for (std::size_t k = 0; k < options.steps; ++k) {
    ScheduleEntry entry;
    entry.r = out.start_r * (1.0 + static_cast<double>(k) * options.increment);
    SlhdConfig config = options.base;
    config.r = entry.r;
    config.seed = derive_seed(seed, 0x736c6864ULL, k);
    bool clean = false;
    try {
      entry.result = slhd_construct(grid, config);
      entry.maximin = maximin(entry.result->design).value;
      clean = entry.result->decrements == 0;
    } catch (const ConstructionFailedError& e) {
      entry.failure = e.what();
    }
    out.entries.push_back(std::move(entry));
    if (clean) out.largest_clean = k;
    if (!clean && options.stop_when_unclean) break;
  }
  out.best = out.largest_clean;
  for (std::size_t k = 0; !out.best && k < out.entries.size(); ++k) {
    if (!out.entries[k].result) continue;
    std::size_t pick = k;
    for (std::size_t m = k + 1; m < out.entries.size(); ++m) {
      if (out.entries[m].result && out.entries[m].maximin >= out.entries[pick].maximin) pick = m;
    }
    out.best = pick;
  }
  return out;
}

}  // namespace lhd
