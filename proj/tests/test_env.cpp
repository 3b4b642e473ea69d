#include <gtest/gtest.h>

#include <map>
#include <set>

#include "juno/grid.hpp"
#include "support/worlds.hpp"

using namespace juno;

namespace {

EnvironmentConfig small_config() {
  EnvironmentConfig c;
  c.n_x = 20;
  c.n_y = 20;
  c.beacon_count = 6;
  c.p_nlos = 0.3;
  c.seed = 42;
  return c;
}

}  // namespace

TEST(GridEnvironment, paper_scale_zone_count) {
  EnvironmentConfig c;
  c.n_x = 60;
  c.n_y = 50;
  c.beacon_count = 8;
  c.p_nlos = 0.2;
  const GridEnvironment env = build_environment(c);
  EXPECT_EQ(env.n_zones(), 3000);
  EXPECT_DOUBLE_EQ(env.width(), 60.0);
  EXPECT_DOUBLE_EQ(env.height(), 50.0);
}

TEST(GridEnvironment, zero_nlos_probability_gives_all_los) {
  EnvironmentConfig c = small_config();
  c.p_nlos = 0.0;
  const GridEnvironment env = build_environment(c);
  for (int z = 0; z < env.n_zones(); ++z) {
    for (int b = 0; b < env.n_beacons(); ++b) {
      ASSERT_EQ(env.channel_map().at(z, b), ChannelCondition::los);
    }
  }
}

TEST(GridEnvironment, nlos_fraction_matches_probability) {
  const GridEnvironment env = build_environment(small_config());
  int nlos = 0;
  const int total = env.n_zones() * env.n_beacons();
  for (int z = 0; z < env.n_zones(); ++z) {
    for (int b = 0; b < env.n_beacons(); ++b) {
      if (env.channel_map().at(z, b) == ChannelCondition::nlos) ++nlos;
    }
  }
  EXPECT_EQ(total, 2400);
  const double fraction = static_cast<double>(nlos) / total;
  EXPECT_GE(fraction, 0.25);
  EXPECT_LE(fraction, 0.35);
}

TEST(GridEnvironment, channel_map_covers_every_pair) {
  const GridEnvironment env = build_environment(small_config());
  EXPECT_EQ(env.channel_map().table().size(),
            static_cast<std::size_t>(env.n_zones()) * env.n_beacons());
}

TEST(GridEnvironment, rejects_bad_configs) {
  EnvironmentConfig c = small_config();
  c.beacon_count = 0;
  c.beacon_positions.clear();
  EXPECT_THROW(build_environment(c), ValidationError);

  c = small_config();
  c.p_nlos = 1.5;
  EXPECT_THROW(build_environment(c), ValidationError);
  c.p_nlos = -0.1;
  EXPECT_THROW(build_environment(c), ValidationError);

  c = small_config();
  c.beacon_positions = {{-1.0, 0.0}};
  EXPECT_THROW(build_environment(c), ValidationError);

  c = small_config();
  c.beacon_positions = {{0.0, 25.0}};  // beyond the 20 m venue
  EXPECT_THROW(build_environment(c), ValidationError);

  c = small_config();
  c.n_x = 1;
  EXPECT_THROW(build_environment(c), ValidationError);
}

TEST(GridEnvironment, reproducible_for_equal_seeds) {
  const GridEnvironment a = build_environment(small_config());
  const GridEnvironment b = build_environment(small_config());
  EXPECT_EQ(a.channel_map().table(), b.channel_map().table());

  EnvironmentConfig other = small_config();
  other.seed = 43;
  const GridEnvironment d = build_environment(other);
  EXPECT_NE(a.channel_map().table(), d.channel_map().table());
}

TEST(GridEnvironment, perimeter_placement_hits_corners_for_four) {
  const auto positions = perimeter_positions(4, 20.0, 20.0);
  ASSERT_EQ(positions.size(), 4u);
  EXPECT_DOUBLE_EQ(positions[0].x, 0.0);
  EXPECT_DOUBLE_EQ(positions[0].y, 0.0);
  EXPECT_DOUBLE_EQ(positions[1].x, 20.0);
  EXPECT_DOUBLE_EQ(positions[1].y, 0.0);
  EXPECT_DOUBLE_EQ(positions[2].x, 20.0);
  EXPECT_DOUBLE_EQ(positions[2].y, 20.0);
  EXPECT_DOUBLE_EQ(positions[3].x, 0.0);
  EXPECT_DOUBLE_EQ(positions[3].y, 20.0);
}

TEST(ZoneCenter, formula) {
  const GridEnvironment env = testworld::los_world(10, 10, {{0, 0}, {10, 10}});
  EXPECT_DOUBLE_EQ(env.zone_center({0, 0}).x, 0.5);
  EXPECT_DOUBLE_EQ(env.zone_center({0, 0}).y, 0.5);
  EXPECT_DOUBLE_EQ(env.zone_center({5, 4}).x, 5.5);
  EXPECT_DOUBLE_EQ(env.zone_center({5, 4}).y, 4.5);

  const GridEnvironment coarse = testworld::los_world(6, 6, {{0, 0}, {12, 12}}, 2.0);
  EXPECT_DOUBLE_EQ(coarse.zone_center({2, 3}).x, 5.0);
  EXPECT_DOUBLE_EQ(coarse.zone_center({2, 3}).y, 7.0);

  EXPECT_THROW(env.zone_center({10, 0}), ValidationError);
  EXPECT_THROW(env.zone_center({0, -1}), ValidationError);
}

TEST(RandomWalk, applies_one_of_eight_directions) {
  const GridEnvironment env = testworld::los_world(12, 12, {{0, 0}, {12, 12}});
  std::set<std::pair<int, int>> seen;
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    Rng rng(seed);
    const UserState next = step_random_walk(UserState{{5, 5}}, env, rng);
    seen.insert({next.zone.x - 5, next.zone.y - 5});
  }
  // every move is one of the 8 neighbors; staying put is impossible away
  // from the boundary
  EXPECT_EQ(seen.size(), 8u);
  EXPECT_EQ(seen.count({0, 0}), 0u);
}

TEST(RandomWalk, clamps_at_the_boundary) {
  const GridEnvironment env = testworld::los_world(12, 12, {{0, 0}, {12, 12}});
  bool stayed = false;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed);
    const UserState next = step_random_walk(UserState{{0, 0}}, env, rng);
    ASSERT_TRUE(env.contains(next.zone));
    if (next.zone == Zone{0, 0}) stayed = true;  // the (-1,-1) draw clamps home
  }
  EXPECT_TRUE(stayed);
}

TEST(RandomWalk, direction_frequencies_are_uniform) {
  const GridEnvironment env = testworld::los_world(21, 21, {{0, 0}, {21, 21}});
  Rng rng(99);
  std::map<std::pair<int, int>, int> tally;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    // restart from the interior each time so the clamp never masks the draw
    const UserState next = step_random_walk(UserState{{10, 10}}, env, rng);
    tally[{next.zone.x - 10, next.zone.y - 10}] += 1;
  }
  ASSERT_EQ(tally.size(), 8u);
  for (const auto& [direction, count] : tally) {
    EXPECT_NEAR(static_cast<double>(count) / n, 1.0 / 8.0, 0.01);
  }
}

TEST(RandomWalk, never_leaves_bounds) {
  const GridEnvironment env = testworld::los_world(3, 3, {{0, 0}, {3, 3}});
  Rng rng(7);
  UserState user{{1, 1}};
  for (int i = 0; i < 100000; ++i) {
    user = step_random_walk(user, env, rng);
    ASSERT_TRUE(env.contains(user.zone));
  }
}

TEST(RandomWalk, walk_sequence_reproducible_per_seed) {
  const GridEnvironment env = testworld::los_world(15, 15, {{0, 0}, {15, 15}});
  auto run = [&](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<Zone> path;
    UserState user{{7, 7}};
    for (int i = 0; i < 500; ++i) {
      user = step_random_walk(user, env, rng);
      path.push_back(user.zone);
    }
    return path;
  };
  EXPECT_EQ(run(5), run(5));
  EXPECT_NE(run(5), run(6));
}
