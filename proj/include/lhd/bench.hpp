#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "lhd/criteria.hpp"
#include "lhd/design.hpp"
#include "lhd/montecarlo.hpp"
#include "lhd/slhd.hpp"

namespace lhd {

/// Minimum inter-point distance of the exact maximin LHD for n = 10d, where
/// known. d = 14 and d = 20 have no known value.
inline std::optional<double> r_star(std::size_t n, std::size_t d) {
  struct Entry {
    std::size_t n, d;
    double r;
  };
  static constexpr Entry kTable[] = {
      {20, 2, 0.223}, {30, 3, 0.360}, {40, 4, 0.476}, {50, 5, 0.589}, {60, 6, 0.687},
      {70, 7, 0.779}, {80, 8, 0.867}, {90, 9, 0.950}, {100, 10, 1.021},
  };
  for (const auto& e : kTable) {
    if (e.n == n && e.d == d) return e.r;
  }
  return std::nullopt;
}

enum class Generator { random_lhd, slhd };

inline std::string_view to_string(Generator g) { return g == Generator::slhd ? "slhd" : "random_lhd"; }

inline Generator parse_generator(std::string_view name) {
  if (name == "random_lhd" || name == "random") return Generator::random_lhd;
  if (name == "slhd") return Generator::slhd;
  throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
}

struct BenchConfig {
  std::vector<std::size_t> dims = {2, 3, 4, 5, 6, 7, 8, 9, 10, 14, 20};
  /// n = points_per_dim * d.
  std::size_t points_per_dim = 10;
  std::size_t replications = 1000;
  std::vector<double> quantiles = {0.1, 0.25, 0.75};
  std::uint64_t seed = 1;
  Generator generator = Generator::random_lhd;
  /// Radius schedule used per replication when generator is slhd.
  ScheduleOptions schedule;
  /// Worker threads; 0 picks the hardware concurrency.
  std::size_t threads = 0;
  /// Pool the nearest-neighbour distances of all replications before taking
  /// quantiles instead of averaging per-design quantiles.
  bool pooled = false;

  void validate() const {
    if (dims.empty()) throw std::invalid_argument("bench needs at least one dimension");
    for (auto d : dims) {
      if (d == 0) throw std::invalid_argument("dimensions must be >= 1");
    }
    if (points_per_dim == 0) throw std::invalid_argument("points per dimension must be >= 1");
    if (replications == 0) throw std::invalid_argument("replications must be >= 1");
    if (quantiles.empty()) throw std::invalid_argument("need at least one quantile level");
    for (double a : quantiles) {
      if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("quantile levels must lie in (0, 1)");
    }
  }
};

struct QuantileStat {
  double alpha = 0.0;
  double mean = 0.0;
  double se = 0.0;
};

struct BenchRow {
  std::size_t d = 0;
  std::size_t n = 0;
  std::vector<QuantileStat> quantiles;
  double time_mean_s = 0.0;
  double time_median_s = 0.0;
  double time_max_s = 0.0;
  /// SLHD only: replications whose schedule produced no design.
  std::size_t failures = 0;
  /// SLHD only: mean of the chosen radius and of the achieved minimum distance.
  double mean_r = 0.0;
  double mean_maximin = 0.0;
  std::optional<double> r_star;

  /// Mean of the quantile at `alpha`; throws if it was not requested.
  double quantile(double alpha) const {
    for (const auto& q : quantiles) {
      if (std::abs(q.alpha - alpha) < 1e-12) return q.mean;
    }
    throw std::out_of_range("quantile " + std::to_string(alpha) + " not in report");
  }
  const QuantileStat& stat(double alpha) const {
    for (const auto& q : quantiles) {
      if (std::abs(q.alpha - alpha) < 1e-12) return q;
    }
    throw std::out_of_range("quantile " + std::to_string(alpha) + " not in report");
  }
};

struct BenchReport {
  BenchConfig config;
  std::vector<BenchRow> rows;

  const BenchRow& row(std::size_t d) const {
    for (const auto& r : rows) {
      if (r.d == d) return r;
    }
    throw std::out_of_range("dimension " + std::to_string(d) + " not in report");
  }
};

namespace detail {

inline double median(std::vector<double> xs) {
  if (xs.empty()) return 0.0;
  std::sort(xs.begin(), xs.end());
  const std::size_t m = xs.size() / 2;
  return xs.size() % 2 ? xs[m] : 0.5 * (xs[m - 1] + xs[m]);
}

/// Calls task(k) for k in [0, count) on up to `threads` workers. Each index is
/// handled exactly once; callers write results into slot k.
template <typename Task>
void parallel_for(std::size_t count, std::size_t threads, Task&& task) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t k = 0; k < count; ++k) task(k);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (std::size_t k = t; k < count; k += threads) task(k);
    });
  }
  for (auto& th : pool) th.join();
}

struct Replication {
  std::optional<NNDistanceSummary> summary;
  double seconds = 0.0;
  double r = 0.0;
  double maximin = 0.0;
};

}  // namespace detail

/// Monte Carlo quantile table: for each d, `replications` designs with
/// n = points_per_dim * d, per-design nearest-neighbour quantiles averaged
/// across replications. Replication k of dimension d uses seed
/// replication_seed(config.seed, d, k); results are reduced in k order, so the
/// report does not depend on the thread count.
inline BenchReport run_bench(const BenchConfig& config) {
  config.validate();
  BenchReport report{config, {}};
  for (const std::size_t d : config.dims) {
    const GridSpec grid(config.points_per_dim * d, d);
    ScheduleOptions schedule = config.schedule;
    if (config.generator == Generator::slhd && !schedule.start_r) {
      schedule.start_r = estimate_start_radius(grid, config.seed, schedule.estimate_replications);
    }
    std::vector<detail::Replication> reps(config.replications);
    detail::parallel_for(config.replications, config.threads, [&](std::size_t k) {
      const std::uint64_t seed = replication_seed(config.seed, d, k);
      const auto t0 = std::chrono::steady_clock::now();
      auto& rep = reps[k];
      if (config.generator == Generator::random_lhd) {
        rep.summary = nn_summary(random_lhd(grid, seed));
      } else {
        const auto sched = radius_schedule(grid, seed, schedule);
        if (const auto* best = sched.best_result()) {
          rep.summary = nn_summary(best->design);
          rep.r = sched.entries[*sched.best].r;
          rep.maximin = sched.entries[*sched.best].maximin;
        }
      }
      rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    BenchRow row;
    row.d = d;
    row.n = grid.n();
    row.r_star = r_star(grid.n(), d);
    std::vector<double> times;
    std::vector<const NNDistanceSummary*> ok;
    double r_sum = 0.0;
    double mm_sum = 0.0;
    for (const auto& rep : reps) {
      times.push_back(rep.seconds);
      if (!rep.summary) {
        ++row.failures;
        continue;
      }
      ok.push_back(&*rep.summary);
      r_sum += rep.r;
      mm_sum += rep.maximin;
    }
    if (!ok.empty() && config.generator == Generator::slhd) {
      row.mean_r = r_sum / static_cast<double>(ok.size());
      row.mean_maximin = mm_sum / static_cast<double>(ok.size());
    }
    for (const double alpha : config.quantiles) {
      QuantileStat stat{alpha, 0.0, 0.0};
      if (config.pooled) {
        std::vector<double> all;
        for (const auto* s : ok) all.insert(all.end(), s->nn().begin(), s->nn().end());
        std::sort(all.begin(), all.end());
        if (!all.empty()) stat.mean = quantile_sorted(all, alpha);
      } else {
        std::vector<double> qs;
        qs.reserve(ok.size());
        for (const auto* s : ok) qs.push_back(s->quantile(alpha));
        const auto ms = mean_se(qs);
        stat.mean = ms.mean;
        stat.se = ms.se;
      }
      row.quantiles.push_back(stat);
    }
    double t_sum = 0.0;
    for (double t : times) t_sum += t;
    row.time_mean_s = t_sum / static_cast<double>(times.size());
    row.time_median_s = detail::median(times);
    row.time_max_s = *std::max_element(times.begin(), times.end());
    report.rows.push_back(std::move(row));
  }
  return report;
}

struct ComparisonRow {
  std::size_t d = 0;
  std::size_t n = 0;
  double random_q25 = 0.0;
  double random_q75 = 0.0;
  double slhd_q10 = 0.0;
  /// SLHD Q_0.1 strictly above the random-LHD Q_0.75.
  bool dominates_q75 = false;
  /// SLHD Q_0.1 strictly above the random-LHD Q_0.25.
  bool dominates_q25 = false;
  std::optional<double> r_star;
};

/// Random LHD against SLHD on the same dimensions and seeds.
inline std::vector<ComparisonRow> compare_generators(BenchConfig config) {
  config.quantiles = {0.1, 0.25, 0.75};
  config.generator = Generator::random_lhd;
  const auto random = run_bench(config);
  config.generator = Generator::slhd;
  const auto slhd = run_bench(config);
  std::vector<ComparisonRow> out;
  for (std::size_t k = 0; k < random.rows.size(); ++k) {
    const auto& a = random.rows[k];
    const auto& b = slhd.rows[k];
    ComparisonRow row{a.d, a.n, a.quantile(0.25), a.quantile(0.75), b.quantile(0.1), false, false, a.r_star};
    row.dominates_q75 = row.slhd_q10 > row.random_q75;
    row.dominates_q25 = row.slhd_q10 > row.random_q25;
    out.push_back(row);
  }
  return out;
}

struct TimingRow {
  std::size_t d = 0;
  std::size_t n = 0;
  double r = 0.0;
  double median_s = 0.0;
  double max_s = 0.0;
  std::size_t runs = 0;
};

/// Wall-clock time of single slhd_construct runs at the estimated random-LHD
/// Q_0.75, n = 10d, `runs` runs per dimension.
inline std::vector<TimingRow> timing_bench(const std::vector<std::size_t>& dims, std::uint64_t seed,
                                           std::size_t runs = 3, SlhdConfig base = {}) {
  if (dims.empty()) throw std::invalid_argument("timing needs at least one dimension");
  if (runs == 0) throw std::invalid_argument("timing needs at least one run");
  std::vector<TimingRow> out;
  for (const std::size_t d : dims) {
    const GridSpec grid(10 * d, d);
    TimingRow row{d, grid.n(), estimate_start_radius(grid, seed, 50), 0.0, 0.0, runs};
    std::vector<double> times;
    for (std::size_t k = 0; k < runs; ++k) {
      SlhdConfig config = base;
      config.r = row.r;
      config.seed = derive_seed(seed, d, k);
      const auto t0 = std::chrono::steady_clock::now();
      (void)slhd_construct(grid, config);
      times.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    row.median_s = detail::median(times);
    row.max_s = *std::max_element(times.begin(), times.end());
    out.push_back(row);
  }
  return out;
}

}  // namespace lhd
