#pragma once

// Small world builders shared by the test suites.

#include <vector>

#include "juno/grid.hpp"

namespace testworld {

/// All-LoS world with explicit beacon positions.
inline juno::GridEnvironment los_world(int n_x, int n_y, std::vector<juno::Vec2> beacons,
                                       double cell_size = 1.0) {
  juno::EnvironmentConfig config;
  config.n_x = n_x;
  config.n_y = n_y;
  config.cell_size = cell_size;
  config.beacon_positions = std::move(beacons);
  config.p_nlos = 0.0;
  config.seed = 1;
  return juno::build_environment(config);
}

/// World where a chosen set of links is forced NLoS and everything else LoS.
inline juno::GridEnvironment world_with_nlos(int n_x, int n_y, std::vector<juno::Vec2> beacons,
                                             const std::vector<std::pair<juno::Zone, int>>& nlos,
                                             double cell_size = 1.0) {
  const int n_zones = n_x * n_y;
  const int n_beacons = static_cast<int>(beacons.size());
  std::vector<juno::ChannelCondition> table(
      static_cast<std::size_t>(n_zones) * n_beacons, juno::ChannelCondition::los);
  std::vector<juno::Beacon> bs;
  for (int i = 0; i < n_beacons; ++i) bs.push_back(juno::Beacon{i, beacons[i]});
  for (const auto& [zone, beacon] : nlos) {
    table[static_cast<std::size_t>(zone.y * n_x + zone.x) * n_beacons + beacon] =
        juno::ChannelCondition::nlos;
  }
  return juno::GridEnvironment(n_x, n_y, cell_size, std::move(bs),
                               juno::ChannelMap(n_zones, n_beacons, std::move(table)));
}

}  // namespace testworld
