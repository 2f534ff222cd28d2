#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "lhd/design.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace lhd;
using testing_support::make_design;

TEST(GridSpec, LevelsAreEvenlySpacedOnUnitInterval) {
  for (std::size_t n : {2, 3, 7, 20, 101}) {
    const GridSpec grid(n, 1);
    const auto levels = grid.levels();
    ASSERT_EQ(levels.size(), n);
    EXPECT_EQ(levels.front(), 0.0);
    EXPECT_EQ(levels.back(), 1.0);
    for (std::size_t j = 1; j < n; ++j) {
      EXPECT_GT(levels[j], levels[j - 1]);
      EXPECT_NEAR(levels[j] - levels[j - 1], 1.0 / static_cast<double>(n - 1), 1e-15);
    }
  }
}

TEST(GridSpec, SingleLevelGridSitsAtCentre) {
  const GridSpec grid(1, 4);
  ASSERT_EQ(grid.levels().size(), 1u);
  EXPECT_EQ(grid.value(0), 0.5);
}

TEST(GridSpec, RejectsEmptyGrid) {
  EXPECT_THROW(GridSpec(0, 2), std::invalid_argument);
  EXPECT_THROW(GridSpec(3, 0), std::invalid_argument);
}

TEST(Design, RejectsOffGridAndWrongSize) {
  EXPECT_THROW(make_design(3, 1, {0, 1, 3}), std::invalid_argument);
  EXPECT_THROW(make_design(3, 2, {0, 1, 2}), std::invalid_argument);
}

TEST(PartialDesign, RejectsReusedLevelAndOverflow) {
  PartialDesign partial(GridSpec(2, 2));
  const Point a = {0, 1};
  partial.add(a);
  const Point clash = {1, 1};
  EXPECT_THROW(partial.add(clash), std::logic_error);
  const Point b = {1, 0};
  partial.add(b);
  EXPECT_TRUE(partial.complete());
  EXPECT_THROW(partial.add(b), std::logic_error);
  EXPECT_TRUE(validate_lhd(partial.to_design()).ok());
}

TEST(RandomLhd, TwoPointsAreComplementaryCorners) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto design = random_lhd(GridSpec(2, 3), seed);
    for (std::size_t s = 0; s < 3; ++s) {
      EXPECT_EQ(design.level(0, s) + design.level(1, s), 1u);
    }
    EXPECT_NEAR(pairwise_distances(design)(0, 1), std::sqrt(3.0), 1e-12);
  }
}

TEST(RandomLhd, SinglePointIsCentre) {
  const auto design = random_lhd(GridSpec(1, 4), 9);
  for (std::size_t s = 0; s < 4; ++s) EXPECT_EQ(design.coord(0, s), 0.5);
  EXPECT_TRUE(validate_lhd(design).ok());
}

TEST(RandomLhd, AlwaysValidAndReproducible) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const GridSpec grid(1 + seed % 37, 1 + seed % 6);
    const auto a = random_lhd(grid, seed);
    EXPECT_TRUE(validate_lhd(a).ok());
    EXPECT_TRUE(oracle::is_lhd(a));
    EXPECT_TRUE(a.same_points(random_lhd(grid, seed)));
    EXPECT_EQ(a.provenance().generator, "random_lhd");
    EXPECT_EQ(a.provenance().seed, seed);
  }
}

TEST(RandomLhd, DifferentSeedsGiveDifferentDesigns) {
  const GridSpec grid(30, 3);
  EXPECT_FALSE(random_lhd(grid, 1).same_points(random_lhd(grid, 2)));
}

TEST(RandomLhd, PermutationsAreUniform) {
  std::map<std::vector<Level>, int> counts;
  const int draws = 12000;
  for (int k = 0; k < draws; ++k) {
    const auto design = random_lhd(GridSpec(3, 1), static_cast<std::uint64_t>(k));
    counts[{design.level(0, 0), design.level(1, 0), design.level(2, 0)}]++;
  }
  ASSERT_EQ(counts.size(), 6u);
  for (const auto& [perm, c] : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 6.0, 0.02);
}

TEST(RandomLhd, DimensionsAreDrawnIndependently) {
  // Ordered pairs of permutations in a 3x2 design should all be equally likely.
  std::map<std::vector<Level>, int> counts;
  const int draws = 36000;
  for (int k = 0; k < draws; ++k) {
    const auto design = random_lhd(GridSpec(3, 2), static_cast<std::uint64_t>(k) + 100000);
    std::vector<Level> key(design.levels().begin(), design.levels().end());
    counts[key]++;
  }
  ASSERT_EQ(counts.size(), 36u);
  for (const auto& [key, c] : counts) EXPECT_NEAR(static_cast<double>(c) / draws, 1.0 / 36.0, 0.008);
}

TEST(ValidateLhd, ReportsDuplicateAndMissingLevels) {
  const auto report = validate_lhd(make_design(2, 1, {0, 0}));
  ASSERT_FALSE(report.ok());
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].dimension, 0u);
  EXPECT_EQ(report.violations[0].duplicated, std::vector<Level>{0});
  EXPECT_EQ(report.violations[0].missing, std::vector<Level>{1});
  EXPECT_EQ(to_string(report.violations[0]), "dimension 1: duplicated levels {0} missing levels {1}");
}

TEST(ValidateLhd, ReportsOnlyOffendingDimensions) {
  const auto report = validate_lhd(make_design(3, 3, {0, 0, 2, 1, 1, 2, 2, 2, 0}));
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].dimension, 2u);
}

TEST(PairwiseDistances, CornerPointsEuclideanAndManhattan) {
  const auto design = make_design(2, 2, {0, 0, 1, 1});
  EXPECT_NEAR(pairwise_distances(design)(0, 1), std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(pairwise_distances(design, 1.0)(0, 1), 2.0, 1e-12);
}

TEST(PairwiseDistances, MatchesNaiveLoop) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto design = random_lhd(GridSpec(5, 3), seed);
    const auto x = oracle::coordinates(design);
    for (double p : {1.0, 2.0, 3.5}) {
      const auto dm = pairwise_distances(design, p);
      for (std::size_t i = 0; i < 5; ++i) {
        for (std::size_t j = 0; j < 5; ++j) {
          const double want = i == j ? 0.0 : oracle::distance(x[i], x[j], p);
          EXPECT_NEAR(dm(i, j), want, 1e-12);
        }
      }
    }
  }
}

TEST(PairwiseDistances, SymmetricZeroDiagonalTriangleInequality) {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto design = random_lhd(GridSpec(12, 1 + seed % 5), seed);
    for (double p : {1.0, 2.0}) {
      const auto dm = pairwise_distances(design, p);
      const std::size_t n = dm.size();
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_EQ(dm(i, i), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
          EXPECT_EQ(dm(i, j), dm(j, i));
          for (std::size_t k = 0; k < n; ++k) EXPECT_LE(dm(i, k), dm(i, j) + dm(j, k) + 1e-12);
        }
      }
    }
  }
}

TEST(PairwiseDistances, RejectsBadOrder) {
  const auto design = make_design(2, 2, {0, 0, 1, 1});
  EXPECT_THROW(pairwise_distances(design, 0.5), std::invalid_argument);
}

TEST(Rng, UniformBelowStaysInRangeAndCoversIt) {
  Rng rng(5);
  std::set<std::uint64_t> seen;
  for (int k = 0; k < 2000; ++k) {
    const auto v = uniform_below(rng, 7);
    ASSERT_LT(v, 7u);
    seen.insert(v);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, DerivedSeedsDiffer) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t a = 0; a < 20; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seeds.insert(derive_seed(1, a, b));
  }
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_EQ(derive_seed(3, 4, 5), derive_seed(3, 4, 5));
}
