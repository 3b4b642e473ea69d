#include <gtest/gtest.h>

#include <cmath>

#include "juno/measurement.hpp"
#include "support/worlds.hpp"

using namespace juno;

TEST(SimulateToa, exact_time_of_flight_without_noise) {
  // beacon 30 m from the zone (0,0) center
  const GridEnvironment env = testworld::los_world(40, 2, {{30.5, 0.5}});
  const NoiseModel noise{0.0, 0.0};
  Rng rng(1);
  const ToaMeasurement m = simulate_toa({0, 0}, env.beacon(0), env, noise, rng);
  EXPECT_DOUBLE_EQ(m.toa, 1.0e-7);
}

TEST(SimulateToa, zero_distance_gives_zero_toa) {
  const GridEnvironment env = testworld::los_world(4, 4, {{0.5, 0.5}});
  const NoiseModel noise{0.0, 0.0};
  Rng rng(1);
  const ToaMeasurement m = simulate_toa({0, 0}, env.beacon(0), env, noise, rng);
  EXPECT_DOUBLE_EQ(m.toa, 0.0);
}

TEST(SimulateToa, nlos_bias_sample_mean_matches_exponential) {
  const GridEnvironment env =
      testworld::world_with_nlos(4, 4, {{0.0, 0.0}}, {{Zone{2, 2}, 0}});
  const NoiseModel noise{0.0, 10e-9};
  Rng rng(1234);
  const double baseline = env.time_of_flight(0, env.zone_index({2, 2}));
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    sum += simulate_toa({2, 2}, env.beacon(0), env, noise, rng).toa - baseline;
  }
  EXPECT_NEAR(sum / n, 10e-9, 0.3e-9);
}

TEST(SimulateToa, nlos_bias_never_negative) {
  const GridEnvironment env =
      testworld::world_with_nlos(4, 4, {{0.0, 0.0}}, {{Zone{1, 3}, 0}});
  const NoiseModel noise{0.0, 5e-9};
  Rng rng(7);
  const double baseline = env.time_of_flight(0, env.zone_index({1, 3}));
  for (int i = 0; i < 10000; ++i) {
    ASSERT_GE(simulate_toa({1, 3}, env.beacon(0), env, noise, rng).toa, baseline);
  }
}

TEST(SimulateToa, los_without_jitter_is_exact_everywhere) {
  const GridEnvironment env = testworld::los_world(6, 6, {{0.0, 0.0}, {6.0, 6.0}});
  const NoiseModel noise{0.0, 10e-9};
  Rng rng(3);
  for (int z = 0; z < env.n_zones(); ++z) {
    const Zone zone = env.zone_at(z);
    for (const Beacon& b : env.beacons()) {
      const ToaMeasurement m = simulate_toa(zone, b, env, noise, rng);
      ASSERT_EQ(m.toa, env.time_of_flight(b.id, z));
    }
  }
}

TEST(SimulateToa, deterministic_per_seed) {
  const GridEnvironment env = testworld::los_world(8, 8, {{0, 0}, {8, 8}});
  const NoiseModel noise{1e-9, 10e-9};
  auto draw = [&](std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> toas;
    for (int i = 0; i < 100; ++i) {
      toas.push_back(simulate_toa({3, 4}, env.beacon(0), env, noise, rng).toa);
    }
    return toas;
  };
  EXPECT_EQ(draw(11), draw(11));
  EXPECT_NE(draw(11), draw(12));
}

TEST(SimulateToa, rejects_bad_inputs) {
  const GridEnvironment env = testworld::los_world(4, 4, {{0, 0}});
  const NoiseModel noise;
  Rng rng(1);
  EXPECT_THROW(simulate_toa({4, 0}, env.beacon(0), env, noise, rng), ValidationError);
  EXPECT_THROW(simulate_toa({0, 0}, Beacon{5, {1, 1}}, env, noise, rng), ValidationError);
  EXPECT_THROW((NoiseModel{-1e-9, 0.0}).validate(), ValidationError);
}

TEST(Tdoa, equidistant_beacons_cancel) {
  const GridEnvironment env = testworld::los_world(21, 5, {{0.5, 0.5}, {20.5, 0.5}});
  const NoiseModel noise{0.0, 0.0};
  Rng rng(1);
  // zone (10,0) center (10.5, 0.5) is equidistant from both beacons
  const auto m0 = simulate_toa({10, 0}, env.beacon(0), env, noise, rng);
  const auto m1 = simulate_toa({10, 0}, env.beacon(1), env, noise, rng);
  EXPECT_DOUBLE_EQ(tdoa(m0, m1), 0.0);
}

TEST(Tdoa, thirty_meter_path_difference) {
  const ToaMeasurement near{0, 10.0 / speed_of_light};
  const ToaMeasurement far{1, 40.0 / speed_of_light};
  EXPECT_NEAR(tdoa(far, near), 1.0e-7, 1e-22);
}

TEST(Tdoa, antisymmetric) {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const ToaMeasurement a{0, rng.uniform01() * 1e-6};
    const ToaMeasurement b{1, rng.uniform01() * 1e-6};
    ASSERT_DOUBLE_EQ(tdoa(a, b), -tdoa(b, a));
  }
}

TEST(Tdoa, rejects_identical_beacons) {
  const ToaMeasurement a{2, 1e-8};
  const ToaMeasurement b{2, 2e-8};
  EXPECT_THROW(tdoa(a, b), ValidationError);
}
