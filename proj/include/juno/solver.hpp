#pragma once

#include <optional>
#include <span>
#include <vector>

#include "juno/common.hpp"
#include "juno/grid.hpp"
#include "juno/measurement.hpp"

namespace juno {

/// Solved user location: the zone minimizing the sum of squared TDoA
/// residuals, plus that minimal residual (seconds^2).
struct PositionEstimate {
  Zone zone{};
  double residual{};
};

/// Residuals within this band of the minimum count as tied (seconds^2).
inline constexpr double solver_tie_epsilon = 1e-24;

/// Model arrival-time difference for a user at the given zone center:
/// (|p - p_i| - |p - p_j|) / c.
inline double predicted_tdoa(Zone zone, const Beacon& beacon_i, const Beacon& beacon_j,
                             const GridEnvironment& env) {
  const Vec2 p = env.zone_center(zone);
  return (distance(p, beacon_i.position) - distance(p, beacon_j.position)) / speed_of_light;
}

/// Sum of squared TDoA residuals at every zone (row-major), with
/// measurements[0] as the reference beacon. This is the surface solve_grid
/// minimizes; the CLI can dump it for inspection.
inline std::vector<double> residual_surface(std::span<const ToaMeasurement> measurements,
                                            const GridEnvironment& env) {
  if (measurements.size() < 2) {
    throw ValidationError("solve_grid needs at least 2 measurements");
  }
  for (std::size_t i = 0; i < measurements.size(); ++i) {
    env.beacon(measurements[i].beacon_id);  // id validity
    for (std::size_t j = i + 1; j < measurements.size(); ++j) {
      if (measurements[i].beacon_id == measurements[j].beacon_id) {
        throw ValidationError("duplicate beacon id in measurement set");
      }
    }
  }
  const int ref = measurements[0].beacon_id;
  const int n_zones = env.n_zones();
  std::vector<double> surface(n_zones, 0.0);
  for (std::size_t k = 1; k < measurements.size(); ++k) {
    const double delta = measurements[k].toa - measurements[0].toa;
    const int b = measurements[k].beacon_id;
    for (int z = 0; z < n_zones; ++z) {
      const double predicted = env.time_of_flight(b, z) - env.time_of_flight(ref, z);
      const double r = delta - predicted;
      surface[z] += r * r;
    }
  }
  return surface;
}

/// Grid-constrained TDoA inversion: exhaustive search over the discrete zone
/// set. Ties within solver_tie_epsilon prefer the candidate nearest to prev
/// when given (distance between zone centers; equal distances fall back to
/// the index rule), otherwise the smallest row-major zone index. With a
/// single measurement pair the measurements constrain only a hyperbola, and
/// the tie rule is what pins the returned zone.
inline PositionEstimate solve_grid(std::span<const ToaMeasurement> measurements,
                                   const GridEnvironment& env,
                                   std::optional<Zone> prev = std::nullopt) {
  if (prev && !env.contains(*prev)) throw ValidationError("prev zone out of bounds");
  const std::vector<double> surface = residual_surface(measurements, env);

  double best = surface[0];
  for (double r : surface) best = std::min(best, r);
  const double cutoff = best + solver_tie_epsilon;

  int chosen = -1;
  if (prev) {
    const Vec2 anchor = env.zone_center(*prev);
    double best_dist = 0.0;
    for (int z = 0; z < env.n_zones(); ++z) {
      if (surface[z] > cutoff) continue;
      const Vec2 c = env.zone_center(env.zone_at(z));
      const double dx = c.x - anchor.x;
      const double dy = c.y - anchor.y;
      const double d2 = dx * dx + dy * dy;
      if (chosen < 0 || d2 < best_dist) {
        chosen = z;
        best_dist = d2;
      }
    }
  } else {
    for (int z = 0; z < env.n_zones(); ++z) {
      if (surface[z] <= cutoff) {
        chosen = z;
        break;
      }
    }
  }
  return PositionEstimate{env.zone_at(chosen), surface[chosen]};
}

}  // namespace juno
