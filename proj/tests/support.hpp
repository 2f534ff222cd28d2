#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lhd/design.hpp"
#include "lhd/rng.hpp"

namespace testing_support {

inline lhd::Design make_design(std::size_t n, std::size_t d, std::vector<lhd::Level> levels) {
  return lhd::Design(lhd::GridSpec(n, d), std::move(levels));
}

/// The same points listed in a random order.
inline lhd::Design permute_points(const lhd::Design& design, std::uint64_t seed) {
  lhd::Rng rng(seed);
  std::vector<std::size_t> order(design.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  lhd::shuffle(order, rng);
  std::vector<lhd::Level> levels;
  for (std::size_t i : order) {
    for (std::size_t s = 0; s < design.dim(); ++s) levels.push_back(design.level(i, s));
  }
  return lhd::Design(design.grid(), std::move(levels));
}

/// The same design with its dimensions relabelled at random.
inline lhd::Design permute_dimensions(const lhd::Design& design, std::uint64_t seed) {
  lhd::Rng rng(seed);
  std::vector<std::size_t> order(design.dim());
  for (std::size_t s = 0; s < order.size(); ++s) order[s] = s;
  lhd::shuffle(order, rng);
  std::vector<lhd::Level> levels;
  for (std::size_t i = 0; i < design.size(); ++i) {
    for (std::size_t s : order) levels.push_back(design.level(i, s));
  }
  return lhd::Design(design.grid(), std::move(levels));
}

}  // namespace testing_support
