#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "juno/action_space.hpp"
#include "juno/common.hpp"
#include "juno/grid.hpp"
#include "juno/measurement.hpp"
#include "juno/qtable.hpp"
#include "juno/rng.hpp"
#include "juno/solver.hpp"

namespace juno {

/// The anchor-selection rules under comparison. All of them feed the same
/// measurement and solver pipeline, so differences isolate the selection.
enum class SelectorKind { nearest_neighbor, random, gdop, wls, policy };

inline const char* to_string(SelectorKind kind) {
  switch (kind) {
    case SelectorKind::nearest_neighbor: return "nn";
    case SelectorKind::random: return "random";
    case SelectorKind::gdop: return "gdop";
    case SelectorKind::wls: return "wls";
    case SelectorKind::policy: return "policy";
  }
  return "?";
}

inline SelectorKind selector_from_string(const std::string& name) {
  if (name == "nn" || name == "nearest-neighbor") return SelectorKind::nearest_neighbor;
  if (name == "random") return SelectorKind::random;
  if (name == "gdop") return SelectorKind::gdop;
  if (name == "wls") return SelectorKind::wls;
  if (name == "policy" || name == "juno") return SelectorKind::policy;
  throw ValidationError("unknown selector: " + name +
                        " (expected policy|nn|random|gdop|wls)");
}

/// The n_r beacons with the smallest measured arrival time — an observable
/// proxy for distance, so NLoS bias feeds straight into the ranking.
/// Equal times resolve to the lower id. Returns ascending ids.
inline std::vector<int> nn_select(std::span<const ToaMeasurement> all_toas, int n_r) {
  if (static_cast<int>(all_toas.size()) < n_r) {
    throw ValidationError("nn_select: fewer measurements than n_r");
  }
  std::vector<int> order(all_toas.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    if (all_toas[a].toa != all_toas[b].toa) return all_toas[a].toa < all_toas[b].toa;
    return all_toas[a].beacon_id < all_toas[b].beacon_id;
  });
  std::vector<int> subset;
  subset.reserve(n_r);
  for (int k = 0; k < n_r; ++k) subset.push_back(all_toas[order[k]].beacon_id);
  std::sort(subset.begin(), subset.end());
  return subset;
}

/// Uniform draw over all C(n, n_r) subsets via a partial Fisher-Yates
/// shuffle. Returns ascending ids.
inline std::vector<int> random_select(int n_beacons, int n_r, Rng& rng) {
  if (n_beacons < n_r) throw ValidationError("random_select: fewer beacons than n_r");
  std::vector<int> ids(n_beacons);
  std::iota(ids.begin(), ids.end(), 0);
  for (int k = 0; k < n_r; ++k) {
    const int j = k + static_cast<int>(rng.uniform_int(n_beacons - k));
    std::swap(ids[k], ids[j]);
  }
  std::vector<int> subset(ids.begin(), ids.begin() + n_r);
  std::sort(subset.begin(), subset.end());
  return subset;
}

/// Geometric dilution of precision of one subset as seen from a zone center:
/// sqrt(trace((G^T G)^-1)) with G rows [unit_x, unit_y, 1] per beacon.
/// Returns nullopt when G^T G is singular (collinear geometry) or a beacon
/// coincides with the zone center.
inline std::optional<double> gdop_metric(Zone approx_zone, std::span<const int> subset,
                                         const GridEnvironment& env) {
  const Vec2 p = env.zone_center(approx_zone);
  // accumulate M = G^T G directly; M is symmetric 3x3
  double m00 = 0, m01 = 0, m02 = 0, m11 = 0, m12 = 0, m22 = 0;
  for (int id : subset) {
    const Vec2 b = env.beacon(id).position;
    const double dx = b.x - p.x;
    const double dy = b.y - p.y;
    const double d = std::sqrt(dx * dx + dy * dy);
    if (d == 0.0) return std::nullopt;
    const double ux = dx / d;
    const double uy = dy / d;
    m00 += ux * ux;
    m01 += ux * uy;
    m02 += ux;
    m11 += uy * uy;
    m12 += uy;
    m22 += 1.0;
  }
  const double c00 = m11 * m22 - m12 * m12;
  const double c01 = m02 * m12 - m01 * m22;
  const double c02 = m01 * m12 - m02 * m11;
  const double c11 = m00 * m22 - m02 * m02;
  const double c12 = m01 * m02 - m00 * m12;
  const double c22 = m00 * m11 - m01 * m01;
  const double det = m00 * c00 + m01 * c01 + m02 * c02;
  if (std::abs(det) < 1e-12) return std::nullopt;
  const double trace_inv = (c00 + c11 + c22) / det;
  if (!(trace_inv > 0.0)) return std::nullopt;
  return std::sqrt(trace_inv);
}

/// Subset minimizing the GDOP metric at an approximate position (previous
/// estimate, or the grid center before any). Singular subsets are skipped;
/// ties keep the lexicographically smallest subset. With n_r = 2 every
/// G^T G is rank-deficient, so this selector needs n_r >= 3.
inline std::vector<int> gdop_select(Zone approx_zone, const GridEnvironment& env, int n_r) {
  if (!env.contains(approx_zone)) throw ValidationError("approx zone out of bounds");
  const ActionSpace actions(env.n_beacons(), n_r);
  int best = -1;
  double best_gdop = 0.0;
  for (int a = 0; a < actions.n_actions(); ++a) {
    const auto metric = gdop_metric(approx_zone, actions.subset(a), env);
    if (!metric) continue;
    if (best < 0 || *metric < best_gdop) {
      best = a;
      best_gdop = *metric;
    }
  }
  if (best < 0) {
    throw ValidationError("gdop_select: every subset has singular geometry");
  }
  const auto s = actions.subset(best);
  return std::vector<int>(s.begin(), s.end());
}

/// Subset whose grid-solved position has the smallest weighted residual
/// (weights uniform). Ties keep the lexicographically smallest subset.
inline std::vector<int> wls_select(std::span<const ToaMeasurement> all_toas,
                                   const GridEnvironment& env, Zone approx_zone, int n_r) {
  if (!env.contains(approx_zone)) throw ValidationError("approx zone out of bounds");
  if (static_cast<int>(all_toas.size()) != env.n_beacons()) {
    throw ValidationError("wls_select needs one measurement per beacon");
  }
  for (std::size_t i = 0; i < all_toas.size(); ++i) {
    if (all_toas[i].beacon_id != static_cast<int>(i)) {
      throw ValidationError("wls_select expects measurements ordered by beacon id");
    }
  }
  const ActionSpace actions(env.n_beacons(), n_r);
  int best = -1;
  double best_residual = 0.0;
  std::vector<ToaMeasurement> subset_toas(n_r);
  for (int a = 0; a < actions.n_actions(); ++a) {
    const auto subset = actions.subset(a);
    for (int k = 0; k < n_r; ++k) subset_toas[k] = all_toas[subset[k]];
    const PositionEstimate est = solve_grid(subset_toas, env, approx_zone);
    if (best < 0 || est.residual < best_residual) {
      best = a;
      best_residual = est.residual;
    }
  }
  const auto s = actions.subset(best);
  return std::vector<int>(s.begin(), s.end());
}

}  // namespace juno
