#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "juno/common.hpp"
#include "juno/rng.hpp"

namespace juno {

/// Fixed UWB transceiver at a known position. Ids are contiguous from 0 and
/// index both the channel map and the cached time-of-flight table.
struct Beacon {
  int id{};
  Vec2 position{};
};

enum class ChannelCondition : std::uint8_t { los = 0, nlos = 1 };

/// Static per-(zone, beacon) link condition, zone-major. Every pair has
/// exactly one entry; the map never changes after construction.
class ChannelMap {
 public:
  ChannelMap() = default;
  ChannelMap(int n_zones, int n_beacons, std::vector<ChannelCondition> table)
      : n_zones_(n_zones), n_beacons_(n_beacons), table_(std::move(table)) {
    if (table_.size() != static_cast<std::size_t>(n_zones_) * n_beacons_) {
      throw ValidationError("channel map table size does not match n_zones * n_beacons");
    }
  }

  int n_zones() const { return n_zones_; }
  int n_beacons() const { return n_beacons_; }

  ChannelCondition at(int zone_index, int beacon_id) const {
    return table_[static_cast<std::size_t>(zone_index) * n_beacons_ + beacon_id];
  }

  const std::vector<ChannelCondition>& table() const { return table_; }

 private:
  int n_zones_ = 0;
  int n_beacons_ = 0;
  std::vector<ChannelCondition> table_;
};

/// The user's current zone.
struct UserState {
  Zone zone{};
};

/// Discretized indoor venue: n_x * n_y square zones of cell_size meters,
/// a fixed beacon deployment and a static channel map. Immutable after
/// construction and safe to share across concurrent runs.
class GridEnvironment {
 public:
  GridEnvironment(int n_x, int n_y, double cell_size, std::vector<Beacon> beacons,
                  ChannelMap channel_map)
      : n_x_(n_x),
        n_y_(n_y),
        cell_size_(cell_size),
        beacons_(std::move(beacons)),
        channel_map_(std::move(channel_map)) {
    if (n_x_ < 2 || n_y_ < 2) throw ValidationError("grid needs n_x >= 2 and n_y >= 2");
    if (!(cell_size_ > 0.0)) throw ValidationError("cell_size must be positive");
    if (beacons_.empty()) throw ValidationError("at least one beacon is required");
    for (std::size_t i = 0; i < beacons_.size(); ++i) {
      const Beacon& b = beacons_[i];
      if (b.id != static_cast<int>(i)) {
        throw ValidationError("beacon ids must be unique and contiguous from 0");
      }
      if (b.position.x < 0.0 || b.position.x > width() || b.position.y < 0.0 ||
          b.position.y > height()) {
        throw ValidationError("beacon " + std::to_string(b.id) + " lies outside the venue");
      }
    }
    if (channel_map_.n_zones() != n_zones() ||
        channel_map_.n_beacons() != static_cast<int>(beacons_.size())) {
      throw ValidationError("channel map dimensions do not match the environment");
    }
    // Cache per-beacon time of flight to every zone center; the solver and
    // the measurement synthesizer both read arrival times from here.
    toa_cache_.resize(beacons_.size() * static_cast<std::size_t>(n_zones()));
    for (const Beacon& b : beacons_) {
      for (int z = 0; z < n_zones(); ++z) {
        toa_cache_[static_cast<std::size_t>(b.id) * n_zones() + z] =
            distance(zone_center(zone_at(z)), b.position) / speed_of_light;
      }
    }
  }

  int n_x() const { return n_x_; }
  int n_y() const { return n_y_; }
  double cell_size() const { return cell_size_; }
  double width() const { return n_x_ * cell_size_; }
  double height() const { return n_y_ * cell_size_; }
  int n_zones() const { return n_x_ * n_y_; }
  int n_beacons() const { return static_cast<int>(beacons_.size()); }
  const std::vector<Beacon>& beacons() const { return beacons_; }
  const Beacon& beacon(int id) const {
    if (id < 0 || id >= n_beacons()) throw ValidationError("unknown beacon id");
    return beacons_[id];
  }
  const ChannelMap& channel_map() const { return channel_map_; }

  bool contains(Zone z) const { return z.x >= 0 && z.x < n_x_ && z.y >= 0 && z.y < n_y_; }

  /// Row-major zone index: y * n_x + x.
  int zone_index(Zone z) const { return z.y * n_x_ + z.x; }
  Zone zone_at(int index) const { return Zone{index % n_x_, index / n_x_}; }

  Vec2 zone_center(Zone z) const {
    if (!contains(z)) throw ValidationError("zone out of bounds");
    return Vec2{(z.x + 0.5) * cell_size_, (z.y + 0.5) * cell_size_};
  }

  /// Cached exact time of flight (seconds) from a beacon to a zone center.
  double time_of_flight(int beacon_id, int zone_index) const {
    return toa_cache_[static_cast<std::size_t>(beacon_id) * n_zones() + zone_index];
  }

 private:
  int n_x_;
  int n_y_;
  double cell_size_;
  std::vector<Beacon> beacons_;
  ChannelMap channel_map_;
  std::vector<double> toa_cache_;
};

/// World description as it appears in the experiment config file. When
/// beacon_positions is empty, beacon_count transceivers are auto-placed
/// evenly along the venue perimeter.
struct EnvironmentConfig {
  int n_x = 20;
  int n_y = 20;
  double cell_size = 1.0;
  std::vector<Vec2> beacon_positions;
  int beacon_count = 6;
  double p_nlos = 0.3;
  std::uint64_t seed = 1;
};

/// Evenly spaced points along the rectangle perimeter, walking
/// counterclockwise from the origin corner.
inline std::vector<Vec2> perimeter_positions(int count, double width, double height) {
  if (count < 1) throw ValidationError("beacon_count must be at least 1");
  const double perimeter = 2.0 * (width + height);
  std::vector<Vec2> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    double s = perimeter * k / count;
    if (s < width) {
      out.push_back({s, 0.0});
    } else if (s < width + height) {
      out.push_back({width, s - width});
    } else if (s < 2.0 * width + height) {
      out.push_back({2.0 * width + height - s, height});
    } else {
      out.push_back({0.0, perimeter - s});
    }
  }
  return out;
}

/// Samples the channel map (i.i.d. NLoS with probability p_nlos, zone-major
/// order) and assembles the immutable environment. Deterministic given rng.
inline GridEnvironment build_environment(const EnvironmentConfig& config, Rng& rng) {
  if (config.p_nlos < 0.0 || config.p_nlos > 1.0) {
    throw ValidationError("p_nlos must lie in [0, 1]");
  }
  if (config.n_x < 2 || config.n_y < 2) throw ValidationError("grid needs n_x >= 2 and n_y >= 2");
  if (!(config.cell_size > 0.0)) throw ValidationError("cell_size must be positive");

  std::vector<Vec2> positions = config.beacon_positions;
  if (positions.empty()) {
    if (config.beacon_count < 1) throw ValidationError("at least one beacon is required");
    positions = perimeter_positions(config.beacon_count, config.n_x * config.cell_size,
                                    config.n_y * config.cell_size);
  }
  std::vector<Beacon> beacons;
  beacons.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    beacons.push_back(Beacon{static_cast<int>(i), positions[i]});
  }

  const int n_zones = config.n_x * config.n_y;
  std::vector<ChannelCondition> table(static_cast<std::size_t>(n_zones) * beacons.size());
  for (int z = 0; z < n_zones; ++z) {
    for (std::size_t b = 0; b < beacons.size(); ++b) {
      table[static_cast<std::size_t>(z) * beacons.size() + b] =
          rng.bernoulli(config.p_nlos) ? ChannelCondition::nlos : ChannelCondition::los;
    }
  }
  return GridEnvironment(config.n_x, config.n_y, config.cell_size, std::move(beacons),
                         ChannelMap(n_zones, static_cast<int>(positions.size()), std::move(table)));
}

inline GridEnvironment build_environment(const EnvironmentConfig& config) {
  Rng rng(derive_seed(config.seed, Stream::environment));
  return build_environment(config, rng);
}

/// The eight unit moves, in the fixed order used for direction draws.
inline constexpr std::pair<int, int> walk_directions[8] = {
    {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

/// One random-walk step: a direction drawn uniformly from the eight non-zero
/// moves, clamped per axis at the venue boundary.
inline UserState step_random_walk(UserState state, const GridEnvironment& env, Rng& rng) {
  if (!env.contains(state.zone)) throw ValidationError("user state out of bounds");
  const auto [dx, dy] = walk_directions[rng.uniform_int(8)];
  Zone next{state.zone.x + dx, state.zone.y + dy};
  next.x = std::min(std::max(next.x, 0), env.n_x() - 1);
  next.y = std::min(std::max(next.y, 0), env.n_y() - 1);
  return UserState{next};
}

}  // namespace juno
