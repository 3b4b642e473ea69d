#pragma once

#include <algorithm>
#include <span>
#include <vector>

#include "juno/common.hpp"
#include "juno/grid.hpp"
#include "juno/rng.hpp"

namespace juno {

/// Estimated first-path arrival time of one beacon's signal, in seconds.
struct ToaMeasurement {
  int beacon_id{};
  double toa{};
};

/// Timing-error model applied on top of the exact time of flight:
/// zero-mean Gaussian jitter always, plus a non-negative exponential excess
/// delay when the link is NLoS. Defaults correspond to roughly 0.3 m ranging
/// noise and 3 m mean NLoS excess.
struct NoiseModel {
  double sigma_toa = 1e-9;        // seconds
  double nlos_bias_mean = 10e-9;  // seconds

  void validate() const {
    if (sigma_toa < 0.0) throw ValidationError("sigma_toa must be >= 0");
    if (nlos_bias_mean < 0.0) throw ValidationError("nlos_bias_mean must be >= 0");
  }
};

/// Synthesizes one arrival-time observation for a user at a zone center.
/// toa = d/c + jitter (truncated at 0), plus exponential bias under NLoS.
/// The Gaussian is always drawn, so the rng stream advances identically
/// regardless of sigma; the exponential is drawn only on NLoS links.
inline ToaMeasurement simulate_toa(Zone user_zone, const Beacon& beacon,
                                   const GridEnvironment& env, const NoiseModel& noise,
                                   Rng& rng) {
  if (!env.contains(user_zone)) throw ValidationError("user zone out of bounds");
  const Beacon& own = env.beacon(beacon.id);  // throws on foreign beacons
  (void)own;
  const int z = env.zone_index(user_zone);
  double toa = env.time_of_flight(beacon.id, z) + rng.normal(0.0, noise.sigma_toa);
  toa = std::max(toa, 0.0);
  if (env.channel_map().at(z, beacon.id) == ChannelCondition::nlos) {
    toa += rng.exponential(noise.nlos_bias_mean);
  }
  return ToaMeasurement{beacon.id, toa};
}

/// Arrival-time difference tau_i - tau_j (seconds, may be negative).
inline double tdoa(const ToaMeasurement& m_i, const ToaMeasurement& m_j) {
  if (m_i.beacon_id == m_j.beacon_id) {
    throw ValidationError("tdoa requires measurements from distinct beacons");
  }
  return m_i.toa - m_j.toa;
}

/// Observations for a beacon subset, in the subset's order.
inline std::vector<ToaMeasurement> simulate_subset(Zone user_zone, std::span<const int> beacon_ids,
                                                   const GridEnvironment& env,
                                                   const NoiseModel& noise, Rng& rng) {
  std::vector<ToaMeasurement> out;
  out.reserve(beacon_ids.size());
  for (int id : beacon_ids) {
    out.push_back(simulate_toa(user_zone, env.beacon(id), env, noise, rng));
  }
  return out;
}

/// Observations for every beacon, ordered by id. Evaluation uses this so the
/// noise stream advances the same way whatever subset a selector then picks.
inline std::vector<ToaMeasurement> simulate_all(Zone user_zone, const GridEnvironment& env,
                                                const NoiseModel& noise, Rng& rng) {
  std::vector<ToaMeasurement> out;
  out.reserve(env.n_beacons());
  for (const Beacon& b : env.beacons()) {
    out.push_back(simulate_toa(user_zone, b, env, noise, rng));
  }
  return out;
}

}  // namespace juno
