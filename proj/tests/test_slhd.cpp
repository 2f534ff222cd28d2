#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "lhd/bench.hpp"
#include "lhd/slhd.hpp"
#include "oracles.hpp"

using namespace lhd;

namespace {

PartialDesign partial_from(const GridSpec& grid, const std::vector<Point>& points) {
  PartialDesign partial(grid);
  for (const auto& p : points) partial.add(p);
  return partial;
}

/// Pairwise distances of the finished design, all strictly above r.
void expect_exclusion(const Design& design, double r) {
  const auto x = oracle::coordinates(design);
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = i + 1; j < x.size(); ++j) ASSERT_GT(oracle::distance(x[i], x[j]), r) << i << "," << j;
  }
}

}  // namespace

TEST(SeedPoint, CentralBandAndDistinct) {
  Rng rng(1);
  for (int k = 0; k < 1000; ++k) {
    const auto p = seed_point(GridSpec(20, 2), rng);
    ASSERT_EQ(p.size(), 2u);
    EXPECT_NE(p[0], p[1]);
    for (auto v : p) {
      EXPECT_GE(v, 5u);
      EXPECT_LE(v, 14u);
    }
  }
}

TEST(SeedPoint, NarrowBandFallsBackToWholeGrid) {
  Rng rng(2);
  std::set<Point> seen;
  for (int k = 0; k < 200; ++k) seen.insert(seed_point(GridSpec(2, 2), rng));
  EXPECT_EQ(seen, (std::set<Point>{{0, 1}, {1, 0}}));
}

TEST(SeedPoint, SquareGridGivesPermutation) {
  Rng rng(3);
  auto p = seed_point(GridSpec(10, 10), rng);
  std::sort(p.begin(), p.end());
  for (Level j = 0; j < 10; ++j) EXPECT_EQ(p[j], j);
}

TEST(SeedPoint, MoreDimensionsThanLevelsIsInfeasible) {
  Rng rng(4);
  EXPECT_THROW(seed_point(GridSpec(3, 4), rng), InfeasibleSeedError);
}

TEST(DrawZ, FreeLevelsWithOneCoordinateNearCentre) {
  const GridSpec grid(20, 3);
  const LevelUsage usage(grid);
  Rng rng(5);
  for (int k = 0; k < 1000; ++k) {
    const auto z = draw_z(grid, usage, rng, 0.15);
    bool centred = false;
    for (std::size_t s = 0; s < 3; ++s) centred = centred || std::abs(grid.value(z[s]) - 0.5) <= 0.15 + 1e-12;
    EXPECT_TRUE(centred);
  }
}

TEST(DrawZ, AvoidsUsedLevels) {
  const GridSpec grid(12, 3);
  Rng rng(6);
  const auto partial = partial_from(grid, {{5, 6, 7}, {0, 11, 3}, {9, 2, 6}});
  const auto usage = LevelUsage::from(partial);
  for (int k = 0; k < 500; ++k) {
    const auto z = draw_z(grid, usage, rng, 0.15);
    for (std::size_t s = 0; s < 3; ++s) EXPECT_FALSE(usage.used(s, z[s]));
  }
}

TEST(DrawZ, ForcedByTheOnlyFreeLevel) {
  const GridSpec grid(10, 2);
  std::vector<Point> pts;
  const std::vector<Level> second = {0, 1, 2, 3, 4, 5, 6, 8, 9};
  for (Level j = 0; j < 9; ++j) pts.push_back({j, second[j]});
  const auto usage = LevelUsage::from(partial_from(grid, pts));
  Rng rng(7);
  for (int k = 0; k < 20; ++k) EXPECT_EQ(draw_z(grid, usage, rng, 0.15), (Point{9, 7}));
}

TEST(DrawZ, TwoPointGridGivesComplementaryCorner) {
  const GridSpec grid(2, 2);
  const auto usage = LevelUsage::from(partial_from(grid, {{0, 1}}));
  Rng rng(8);
  EXPECT_EQ(draw_z(grid, usage, rng, 0.15), (Point{1, 0}));
}

TEST(DrawZ, CompleteDimensionIsExhausted) {
  const GridSpec grid(2, 2);
  const auto usage = LevelUsage::from(partial_from(grid, {{0, 1}, {1, 0}}));
  Rng rng(9);
  EXPECT_THROW(draw_z(grid, usage, rng, 0.15), ExhaustedLevelsError);
}

TEST(CandidateSet, SinglePointGivesSnappedSpherePointsAndZ) {
  const GridSpec grid(20, 2);
  const auto partial = partial_from(grid, {{9, 10}});
  const auto usage = LevelUsage::from(partial);
  const Point z = {0, 0};
  const double r = 0.3;
  Rng rng(10);
  const auto set = candidate_set(z, partial, usage, r, rng);
  EXPECT_LE(set.size(), 3u);
  EXPECT_NE(std::find(set.begin(), set.end(), z), set.end());

  // Continuous sphere points on the line from x_1 towards the origin.
  const double x0 = 9.0 / 19.0, y0 = 10.0 / 19.0;
  const double norm = std::hypot(x0, y0);
  for (const double sign : {1.0, -1.0}) {
    const double cx = x0 - sign * r * x0 / norm;
    const double cy = y0 - sign * r * y0 / norm;
    const bool found = std::any_of(set.begin(), set.end(), [&](const Point& p) {
      return p != z && std::abs(grid.value(p[0]) - cx) <= 1.0 / 19.0 + 1e-12 &&
             std::abs(grid.value(p[1]) - cy) <= 1.0 / 19.0 + 1e-12;
    });
    EXPECT_TRUE(found) << "sphere point " << cx << "," << cy;
  }
  for (const auto& p : set) EXPECT_FALSE(usage.used(0, p[0]) || usage.used(1, p[1]));
}

TEST(CandidateSet, CoincidentZUsesRandomDirection) {
  const GridSpec grid(20, 2);
  const auto partial = partial_from(grid, {{9, 10}});
  const auto usage = LevelUsage::from(partial);
  Rng rng(11);
  CandidateSetStats stats;
  const auto set = candidate_set(Point{9, 10}, partial, usage, 0.3, rng, &stats);
  EXPECT_EQ(stats.degenerate_directions, 1u);
  EXPECT_GE(set.size(), 2u);
}

TEST(CandidateSet, FarZIsAcceptedAsIs) {
  const GridSpec grid(20, 2);
  const auto partial = partial_from(grid, {{9, 10}});
  const auto usage = LevelUsage::from(partial);
  Rng rng(12);
  const Point z = {0, 19};
  const auto set = candidate_set(z, partial, usage, 0.2, rng);
  EXPECT_NE(std::find(set.begin(), set.end(), z), set.end());
  const auto chosen = select_candidate({z}, partial, usage, 0.2);
  ASSERT_TRUE(chosen.has_value());
  EXPECT_EQ(chosen->point, z);
}

TEST(SelectCandidate, NoneWhenAllInsideSpheres) {
  const GridSpec grid(20, 2);
  const auto partial = partial_from(grid, {{9, 10}});
  const auto usage = LevelUsage::from(partial);
  EXPECT_FALSE(select_candidate({{10, 11}, {8, 9}}, partial, usage, 0.3).has_value());
}

TEST(SelectCandidate, BoundaryDistanceIsNotOutside) {
  // Distance exactly r must be rejected: the test is strict.
  const GridSpec grid(11, 2);
  const auto partial = partial_from(grid, {{0, 0}});
  const auto usage = LevelUsage::from(partial);
  EXPECT_FALSE(select_candidate({{3, 4}}, partial, usage, 0.5).has_value());
  EXPECT_TRUE(select_candidate({{3, 4}}, partial, usage, 0.49).has_value());
}

TEST(SelectCandidate, TieBreakCountsMinimalLevelsAfterInsertion) {
  // Usage per level after three points: {1, 1, 1, 1, 2, 0}; level 5 is the
  // unique least-used level.
  const GridSpec grid(6, 2);
  const auto partial = partial_from(grid, {{0, 2}, {1, 3}, {4, 4}});
  const auto usage = LevelUsage::from(partial);
  ASSERT_EQ(usage.column_sums(), (std::vector<std::size_t>{1, 1, 1, 1, 2, 0}));
  const Point filler = {5, 0};
  const Point other = {3, 1};
  // Counted on B(L_k + x): the filler lifts the minimum to 1, which four levels
  // then share; the other keeps level 5 as the single minimum.
  EXPECT_EQ(usage.minimal_columns_after(filler), 4u);
  EXPECT_EQ(usage.minimal_columns_after(other), 1u);
  const auto chosen = select_candidate({filler, other}, partial, usage, 0.01);
  ASSERT_TRUE(chosen.has_value());
  EXPECT_EQ(chosen->point, other);
  EXPECT_EQ(chosen->feasible, 2u);
}

TEST(SelectCandidate, EqualScoresPreferTighterClearance) {
  const GridSpec grid(20, 2);
  const auto partial = partial_from(grid, {{0, 0}});
  const auto usage = LevelUsage::from(partial);
  const Point near = {4, 3};   // squared level distance 25
  const Point far = {12, 13};  // squared level distance 313
  ASSERT_EQ(usage.minimal_columns_after(near), usage.minimal_columns_after(far));
  const auto chosen = select_candidate({far, near}, partial, usage, 0.2);
  ASSERT_TRUE(chosen.has_value());
  EXPECT_EQ(chosen->point, near);
  EXPECT_EQ(chosen->nearest_squared, 25);
}

TEST(ExclusionThreshold, AgreesWithRealDistanceTest) {
  Rng rng(13);
  for (int k = 0; k < 2000; ++k) {
    const GridSpec grid(2 + uniform_below(rng, 200), 2);
    const double r = 0.01 + uniform01(rng) * 1.5;
    const auto t = exclusion_threshold(grid, r);
    EXPECT_GT(grid.to_unit(std::sqrt(static_cast<double>(t))), r);
    if (t > 0) {
      EXPECT_FALSE(grid.to_unit(std::sqrt(static_cast<double>(t - 1))) > r);
    }
  }
}

TEST(LevelUsage, NearestFreeTiesGoTowardCentre) {
  const GridSpec grid(11, 1);
  LevelUsage usage(grid);
  const Point p = {3};
  usage.mark(p);
  EXPECT_EQ(usage.nearest_free(0, 3.0), 4u);  // levels 2 and 4 tie; 4 is nearer the centre 5
  const Point q = {7};
  usage.mark(q);
  EXPECT_EQ(usage.nearest_free(0, 7.0), 6u);
  EXPECT_EQ(usage.nearest_free(0, -4.0), 0u);
  EXPECT_EQ(usage.nearest_free(0, 40.0), 10u);
}

TEST(SlhdConstruct, TwoPointDesignIsCorners) {
  SlhdConfig config;
  config.r = 0.5;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    config.seed = seed;
    const auto result = slhd_construct(GridSpec(2, 2), config);
    EXPECT_NEAR(maximin(result.design).value, std::sqrt(2.0), 1e-12);
    EXPECT_EQ(result.decrements, 0u);
  }
}

TEST(SlhdConstruct, PlanarTwentyPointsAtRandomUpperQuartile) {
  SlhdConfig config;
  config.r = 0.175;
  double q25 = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    config.seed = seed;
    const auto result = slhd_construct(GridSpec(20, 2), config);
    EXPECT_TRUE(validate_lhd(result.design).ok());
    EXPECT_GT(maximin(result.design).value, 0.175) << "seed " << seed;
    EXPECT_LE(maximin(result.design).value, *r_star(20, 2) + 1e-9);
    q25 += nn_summary(result.design).quantile(0.25);
  }
  // Clearly above the random-LHD lower quartile of 0.108.
  EXPECT_GT(q25 / 20.0, 0.175);
}

TEST(SlhdConstruct, InvariantsOverManyRuns) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    const std::size_t d = 2 + seed % 5;
    const GridSpec grid(10 * d, d);
    SlhdConfig config;
    config.seed = seed;
    config.r = 0.6 * estimate_start_radius(grid, seed, 20) + 0.1 * static_cast<double>(seed % 4);
    config.restarts = seed % 3;
    config.restart_on_decrement = seed % 2 == 1;
    const auto result = slhd_construct(grid, config);
    ASSERT_TRUE(validate_lhd(result.design).ok());
    expect_exclusion(result.design, result.r_effective);
    EXPECT_LE(result.r_effective, result.r_requested);
    EXPECT_NEAR(result.r_effective, result.r_requested * std::pow(1.0 - config.r_decrement, result.decrements),
                1e-12 * result.r_requested);
    EXPECT_EQ(result.log.size(), grid.n());
    EXPECT_EQ(result.design.provenance().generator, "slhd");
    EXPECT_EQ(*result.design.provenance().r_effective, result.r_effective);

    // Replay the insertion log: the running usage matrix matches a rebuild
    // after every step, column sums never decrease, and each point was farther
    // than the radius in force when it was placed.
    PartialDesign partial(grid);
    LevelUsage incremental(grid);
    std::vector<std::size_t> prev_sums(grid.n(), 0);
    for (std::size_t k = 0; k < result.log.size(); ++k) {
      const auto& rec = result.log[k];
      EXPECT_EQ(rec.step, k);
      for (std::size_t j = 0; j < partial.size(); ++j) {
        EXPECT_GT(grid.to_unit(std::sqrt(static_cast<double>(squared_level_distance(rec.point, partial.row(j))))),
                  rec.r);
      }
      partial.add(rec.point);
      incremental.mark(rec.point);
      ASSERT_TRUE(incremental == LevelUsage::from(partial));
      for (std::size_t s = 0; s < d; ++s) {
        std::size_t row = 0;
        for (Level j = 0; j < grid.n(); ++j) row += incremental.used(s, j);
        EXPECT_EQ(row, k + 1);
      }
      for (std::size_t j = 0; j < grid.n(); ++j) EXPECT_GE(incremental.column_sums()[j], prev_sums[j]);
      prev_sums = incremental.column_sums();
    }
    for (std::size_t j = 0; j < grid.n(); ++j) EXPECT_EQ(prev_sums[j], d);
    EXPECT_TRUE(partial.to_design().same_points(result.design));
  }
}

TEST(SlhdConstruct, Deterministic) {
  SlhdConfig config;
  config.r = 0.45;
  config.seed = 99;
  const auto a = slhd_construct(GridSpec(50, 5), config);
  const auto b = slhd_construct(GridSpec(50, 5), config);
  EXPECT_TRUE(a.design.same_points(b.design));
  EXPECT_EQ(a.design.provenance(), b.design.provenance());
  EXPECT_EQ(a.attempts, b.attempts);
  EXPECT_EQ(a.decrements, b.decrements);
  EXPECT_EQ(a.restarts, b.restarts);
  config.seed = 100;
  EXPECT_FALSE(slhd_construct(GridSpec(50, 5), config).design.same_points(a.design));
}

TEST(SlhdConstruct, ShrinksRadiusWhenTooLarge) {
  SlhdConfig config;
  config.r = 0.3;
  config.restarts = 0;
  config.seed = 3;
  const auto result = slhd_construct(GridSpec(20, 2), config);
  EXPECT_GT(result.decrements, 0u);
  EXPECT_LT(result.r_effective, 0.3);
  expect_exclusion(result.design, result.r_effective);
}

TEST(SlhdConstruct, FailsBelowFloorWithPartialDesign) {
  SlhdConfig config;
  config.r = 100.0;
  config.restarts = 0;
  try {
    (void)slhd_construct(GridSpec(20, 2), config);
    FAIL() << "expected construction failure";
  } catch (const ConstructionFailedError& e) {
    EXPECT_GE(e.partial.size(), 1u);
    EXPECT_LT(e.partial.size(), 20u);
    EXPECT_EQ(e.log.size(), e.partial.size());
    EXPECT_LT(e.r_last, 1.0);
  }
}

TEST(SlhdConstruct, RejectsBadConfigAndGrids) {
  SlhdConfig config;
  config.r = -1.0;
  EXPECT_THROW(slhd_construct(GridSpec(10, 2), config), std::invalid_argument);
  config = {};
  config.r_decrement = 1.0;
  EXPECT_THROW(slhd_construct(GridSpec(10, 2), config), std::invalid_argument);
  config = {};
  config.center_band = 0.0;
  EXPECT_THROW(slhd_construct(GridSpec(10, 2), config), std::invalid_argument);
  config = {};
  EXPECT_THROW(slhd_construct(GridSpec(3, 4), config), InfeasibleSeedError);
  EXPECT_THROW(slhd_construct(GridSpec(1, 1), config), std::invalid_argument);
}

TEST(RadiusSchedule, StartsNearRandomUpperQuartile) {
  ScheduleOptions options;
  options.steps = 1;
  const auto result = radius_schedule(GridSpec(20, 2), 5, options);
  EXPECT_NEAR(result.start_r, 0.175, 0.01);
  ASSERT_EQ(result.entries.size(), 1u);
  EXPECT_EQ(result.entries[0].r, result.start_r);
}

TEST(RadiusSchedule, ClimbsFromStartAndRespectsBound) {
  ScheduleOptions options;
  options.start_r = 0.270;
  options.steps = 6;
  options.stop_when_unclean = false;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto result = radius_schedule(GridSpec(30, 3), seed, options);
    ASSERT_EQ(result.entries.size(), 6u);
    for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(result.entries[k].r, 0.270 * (1.0 + 0.05 * k), 1e-12);
    const auto* best = result.best_result();
    ASSERT_NE(best, nullptr);
    const double mm = maximin(best->design).value;
    EXPECT_GT(mm, 0.270);
    EXPECT_LE(mm, *r_star(30, 3) + 1e-9);
    ASSERT_TRUE(result.largest_clean.has_value());
    EXPECT_EQ(*result.best, *result.largest_clean);
  }
}

TEST(RadiusSchedule, StopsAfterFirstShrink) {
  ScheduleOptions options;
  options.start_r = 0.2;
  options.increment = 0.5;
  options.steps = 5;
  options.base.restarts = 0;
  const auto result = radius_schedule(GridSpec(20, 2), 1, options);
  ASSERT_LT(result.entries.size(), 5u);
  const auto& last = result.entries.back();
  EXPECT_TRUE(!last.result || last.result->decrements > 0);
}

TEST(RadiusSchedule, TenDimensionsNearReferenceLevel) {
  const auto result = radius_schedule(GridSpec(100, 10), 1);
  const auto* best = result.best_result();
  ASSERT_NE(best, nullptr);
  const double mm = maximin(best->design).value;
  EXPECT_NEAR(mm, 0.823, 0.05);
  EXPECT_LT(mm, 1.021);
}

TEST(RadiusSchedule, RejectsEmptySchedule) {
  ScheduleOptions options;
  options.steps = 0;
  EXPECT_THROW(radius_schedule(GridSpec(20, 2), 1, options), std::invalid_argument);
}
