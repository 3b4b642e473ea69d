#include <gtest/gtest.h>

#include <array>
#include <map>
#include <set>

#include "juno/selectors.hpp"
#include "support/oracles.hpp"
#include "support/worlds.hpp"

using namespace juno;

TEST(NnSelect, picks_the_smallest_arrival_times) {
  const std::vector<ToaMeasurement> toas = {{0, 5e-9}, {1, 3e-9}, {2, 9e-9}, {3, 1e-9}};
  EXPECT_EQ(nn_select(toas, 2), (std::vector<int>{1, 3}));
}

TEST(NnSelect, equal_times_resolve_to_lower_ids) {
  const std::vector<ToaMeasurement> toas = {{0, 4e-9}, {1, 4e-9}, {2, 4e-9}, {3, 4e-9}};
  EXPECT_EQ(nn_select(toas, 2), (std::vector<int>{0, 1}));
  EXPECT_THROW(nn_select(toas, 5), ValidationError);
}

TEST(NnSelect, ranking_follows_the_measured_bias) {
  // beacon 0 is physically nearest but a 50 ns NLoS bias pushes it out of
  // the selection; nn only ever sees the measured times
  std::vector<ToaMeasurement> toas = {{0, 2e-9}, {1, 4e-9}, {2, 6e-9}};
  EXPECT_EQ(nn_select(toas, 2), (std::vector<int>{0, 1}));
  toas[0].toa += 50e-9;
  EXPECT_EQ(nn_select(toas, 2), (std::vector<int>{1, 2}));
}

TEST(RandomSelect, full_set_when_n_equals_n_r) {
  Rng rng(1);
  EXPECT_EQ(random_select(3, 3, rng), (std::vector<int>{0, 1, 2}));
}

TEST(RandomSelect, uniform_over_subsets) {
  Rng rng(404);
  std::map<std::vector<int>, int> tally;
  const int n = 100000;
  for (int i = 0; i < n; ++i) tally[random_select(5, 2, rng)] += 1;
  ASSERT_EQ(tally.size(), 10u);
  for (const auto& [subset, count] : tally) {
    EXPECT_NEAR(static_cast<double>(count) / n, 0.1, 0.01);
  }
}

TEST(RandomSelect, deterministic_per_seed) {
  auto draw = [](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<std::vector<int>> subsets;
    for (int i = 0; i < 50; ++i) subsets.push_back(random_select(6, 3, rng));
    return subsets;
  };
  EXPECT_EQ(draw(8), draw(8));
  EXPECT_NE(draw(8), draw(9));
}

TEST(GdopSelect, right_angle_geometry_beats_collinear) {
  // beacons 0,1,2 collinear with the user along y = 10.5; beacon 3 breaks
  // the line. any subset of {0,1,2} alone is singular and skipped.
  const GridEnvironment env =
      testworld::los_world(21, 21, {{0.0, 10.5}, {21.0, 10.5}, {13.0, 10.5}, {10.5, 0.0}});
  const auto subset = gdop_select({10, 10}, env, 3);
  EXPECT_TRUE(std::find(subset.begin(), subset.end(), 3) != subset.end());
}

TEST(GdopSelect, symmetric_corners_tie_lexicographically) {
  const GridEnvironment env =
      testworld::los_world(21, 21, {{0, 0}, {21, 0}, {0, 21}, {21, 21}});
  EXPECT_EQ(gdop_select({10, 10}, env, 3), (std::vector<int>{0, 1, 2}));
}

TEST(GdopSelect, all_collinear_raises) {
  const GridEnvironment env =
      testworld::los_world(21, 21, {{0.0, 10.5}, {21.0, 10.5}, {13.0, 10.5}});
  EXPECT_THROW(gdop_select({10, 10}, env, 3), ValidationError);
}

TEST(GdopMetric, agrees_with_explicit_inversion_oracle) {
  Rng rng(555);
  int compared = 0;
  for (int trial = 0; trial < 2000 && compared < 200; ++trial) {
    std::vector<Vec2> positions;
    const int n_beacons = 3 + static_cast<int>(rng.uniform_int(3));
    for (int b = 0; b < n_beacons; ++b) {
      positions.push_back({rng.uniform01() * 20.0, rng.uniform01() * 20.0});
    }
    const GridEnvironment env = testworld::los_world(20, 20, positions);
    const Zone zone{static_cast<int>(rng.uniform_int(20)), static_cast<int>(rng.uniform_int(20))};

    std::vector<int> subset;
    for (int b = 0; b < 3; ++b) subset.push_back(b);

    std::vector<std::array<double, 3>> rows;
    const Vec2 p = env.zone_center(zone);
    bool degenerate = false;
    double m00 = 0, m01 = 0, m02 = 0, m11 = 0, m12 = 0, m22 = 0;
    for (int id : subset) {
      const Vec2 bp = env.beacon(id).position;
      const double d = distance(p, bp);
      if (d == 0.0) degenerate = true;
      rows.push_back({(bp.x - p.x) / d, (bp.y - p.y) / d, 1.0});
      m00 += rows.back()[0] * rows.back()[0];
      m01 += rows.back()[0] * rows.back()[1];
      m02 += rows.back()[0];
      m11 += rows.back()[1] * rows.back()[1];
      m12 += rows.back()[1];
      m22 += 1.0;
    }
    if (degenerate) continue;
    // near-collinear draws leave G^T G almost singular; there both routes
    // lose precision together, so compare only well-conditioned geometries
    const double det = m00 * (m11 * m22 - m12 * m12) - m01 * (m01 * m22 - m02 * m12) +
                       m02 * (m01 * m12 - m02 * m11);
    if (std::abs(det) < 1e-4) continue;

    const auto fast = gdop_metric(zone, subset, env);
    const auto naive = oracle::naive_gdop_trace(rows);
    ASSERT_EQ(fast.has_value(), naive.has_value()) << "trial " << trial;
    if (fast) {
      ASSERT_NEAR(*fast, std::sqrt(*naive), 1e-9 * std::max(1.0, *fast)) << "trial " << trial;
      ++compared;
    }
  }
  EXPECT_EQ(compared, 200);
}

TEST(GdopMetric, invariant_under_whole_cell_translation) {
  const std::vector<Vec2> base = {{1.0, 2.0}, {14.0, 3.0}, {6.0, 13.0}};
  std::vector<Vec2> shifted;
  for (const Vec2& p : base) shifted.push_back({p.x + 4.0, p.y + 3.0});
  const GridEnvironment env_a = testworld::los_world(20, 20, base);
  const GridEnvironment env_b = testworld::los_world(20, 20, shifted);
  const std::vector<int> subset = {0, 1, 2};
  const auto a = gdop_metric({5, 6}, subset, env_a);
  const auto b = gdop_metric({9, 9}, subset, env_b);  // user shifted by the same (4, 3)
  ASSERT_TRUE(a && b);
  EXPECT_NEAR(*a, *b, 1e-12);
}

TEST(WlsSelect, noiseless_world_ties_to_the_first_subset) {
  const GridEnvironment env = testworld::los_world(12, 12, {{0, 0}, {12, 0}, {0, 12}, {12, 12}});
  const NoiseModel none{0.0, 0.0};
  Rng rng(1);
  const auto toas = simulate_all({4, 7}, env, none, rng);
  EXPECT_EQ(wls_select(toas, env, {6, 6}, 3), (std::vector<int>{0, 1, 2}));
}

TEST(WlsSelect, excludes_a_strongly_biased_beacon) {
  const GridEnvironment env = testworld::world_with_nlos(
      12, 12, {{0, 0}, {12, 0}, {0, 12}, {12, 12}}, {{Zone{4, 7}, 1}});
  const NoiseModel noise{0.0, 30e-9};  // bias far beyond the (zero) jitter
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const auto toas = simulate_all({4, 7}, env, noise, rng);
    const auto subset = wls_select(toas, env, {6, 6}, 3);
    ASSERT_EQ(subset, (std::vector<int>{0, 2, 3})) << "trial " << trial;
  }
}

TEST(WlsSelect, validates_inputs) {
  const GridEnvironment env = testworld::los_world(12, 12, {{0, 0}, {12, 0}, {0, 12}});
  const std::vector<ToaMeasurement> two = {{0, 1e-8}, {1, 2e-8}};
  EXPECT_THROW(wls_select(two, env, {6, 6}, 2), ValidationError);
  const std::vector<ToaMeasurement> shuffled = {{1, 1e-8}, {0, 2e-8}, {2, 1e-8}};
  EXPECT_THROW(wls_select(shuffled, env, {6, 6}, 2), ValidationError);
}

TEST(Selectors, always_return_n_r_distinct_valid_ids) {
  const GridEnvironment env =
      testworld::los_world(15, 15, {{0, 0}, {15, 0}, {0, 15}, {15, 15}, {7.5, 0}});
  const NoiseModel noise{1e-9, 10e-9};
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const Zone zone{static_cast<int>(rng.uniform_int(15)), static_cast<int>(rng.uniform_int(15))};
    const auto toas = simulate_all(zone, env, noise, rng);
    for (int n_r = 2; n_r <= 3; ++n_r) {
      std::vector<std::vector<int>> results;
      results.push_back(nn_select(toas, n_r));
      results.push_back(random_select(env.n_beacons(), n_r, rng));
      results.push_back(wls_select(toas, env, zone, n_r));
      if (n_r >= 3) results.push_back(gdop_select(zone, env, n_r));
      for (const auto& subset : results) {
        ASSERT_EQ(static_cast<int>(subset.size()), n_r);
        const std::set<int> unique(subset.begin(), subset.end());
        ASSERT_EQ(static_cast<int>(unique.size()), n_r);
        for (int id : subset) {
          ASSERT_GE(id, 0);
          ASSERT_LT(id, env.n_beacons());
        }
        ASSERT_TRUE(std::is_sorted(subset.begin(), subset.end()));
      }
    }
  }
}
