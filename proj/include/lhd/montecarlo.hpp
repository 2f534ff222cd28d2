#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "lhd/criteria.hpp"
#include "lhd/design.hpp"
#include "lhd/rng.hpp"

namespace lhd {

/// Mean and standard error of a sample, summed in index order.
struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanSe mean_se(const std::vector<double>& xs) {
  if (xs.empty()) return {};
  double sum = 0.0;
  for (double x : xs) sum += x;
  const double m = sum / static_cast<double>(xs.size());
  if (xs.size() < 2) return {m, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  const double var = ss / static_cast<double>(xs.size() - 1);
  return {m, std::sqrt(var / static_cast<double>(xs.size()))};
}

/// Seed of replication `rep` for dimension `d` under `master`.
inline std::uint64_t replication_seed(std::uint64_t master, std::size_t d, std::size_t rep) {
  return derive_seed(master, d, rep);
}

/// Averages the alpha-quantile of nearest-neighbour distances over
/// `replications` random LHDs on `grid`.
inline MeanSe random_lhd_quantile(const GridSpec& grid, double alpha, std::size_t replications,
                                  std::uint64_t master) {
  if (replications == 0) throw std::invalid_argument("replications must be >= 1");
  std::vector<double> qs(replications);
  for (std::size_t rep = 0; rep < replications; ++rep) {
    qs[rep] = nn_summary(random_lhd(grid, replication_seed(master, grid.d(), rep))).quantile(alpha);
  }
  return mean_se(qs);
}

}  // namespace lhd
