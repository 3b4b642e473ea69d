#pragma once

#include <optional>
#include <span>
#include <vector>

#include "juno/action_space.hpp"
#include "juno/agent.hpp"
#include "juno/common.hpp"
#include "juno/grid.hpp"
#include "juno/measurement.hpp"
#include "juno/qtable.hpp"
#include "juno/rng.hpp"
#include "juno/selectors.hpp"
#include "juno/solver.hpp"

namespace juno {

/// A frozen selection rule: either a trained table acted on greedily, or one
/// of the baseline selectors. No learning, no exploration, no guide.
struct FrozenSelector {
  SelectorKind kind = SelectorKind::policy;
  const QTable* table = nullptr;  // required for SelectorKind::policy

  void validate(const GridEnvironment& env, const ActionSpace& actions) const {
    if (kind == SelectorKind::policy) {
      if (table == nullptr) throw ValidationError("policy selector needs a q-table");
      check_table_compatible(*table, env, actions);
    }
  }
};

namespace detail {

/// One localization step shared by evaluation and replay: simulate every
/// beacon (keeps the noise stream aligned across selectors), pick a subset,
/// solve on that subset's measurements.
inline StepRecord frozen_step(Zone true_zone, const FrozenSelector& selector,
                              const GridEnvironment& env, const ActionSpace& actions,
                              const NoiseModel& noise, std::optional<Zone> prev_estimate,
                              Rng& noise_rng, Rng& select_rng) {
  const auto all_toas = simulate_all(true_zone, env, noise, noise_rng);
  const Zone approx = prev_estimate.value_or(Zone{env.n_x() / 2, env.n_y() / 2});

  std::vector<int> subset;
  PolicyUse used = PolicyUse::explore_greedy;
  switch (selector.kind) {
    case SelectorKind::policy: {
      const int a = selector.table->greedy_action(env.zone_index(true_zone));
      const auto s = actions.subset(a);
      subset.assign(s.begin(), s.end());
      break;
    }
    case SelectorKind::nearest_neighbor:
      subset = nn_select(all_toas, actions.n_r());
      break;
    case SelectorKind::random:
      subset = random_select(env.n_beacons(), actions.n_r(), select_rng);
      used = PolicyUse::explore_random;
      break;
    case SelectorKind::gdop:
      subset = gdop_select(approx, env, actions.n_r());
      break;
    case SelectorKind::wls:
      subset = wls_select(all_toas, env, approx, actions.n_r());
      break;
  }

  std::vector<ToaMeasurement> measurements;
  measurements.reserve(subset.size());
  for (int id : subset) measurements.push_back(all_toas[id]);
  const PositionEstimate estimate = solve_grid(measurements, env, prev_estimate);
  const double error_m = location_error(true_zone, estimate.zone, env);

  StepRecord record;
  record.true_zone = true_zone;
  record.action = actions.index_of(subset);
  record.estimated_zone = estimate.zone;
  record.error_m = error_m;
  record.policy_used = used;
  return record;
}

}  // namespace detail

/// Frozen-policy evaluation: n_epoch random-walk episodes of horizon steps.
/// Rewards are logged with the given config so summaries stay comparable
/// with training logs. Deterministic given seeds.
inline EpisodeLog evaluate_policy(const GridEnvironment& env, const ActionSpace& actions,
                                  const FrozenSelector& selector, const NoiseModel& noise,
                                  const AgentConfig& cfg, int n_epoch, int horizon,
                                  const RunSeeds& seeds) {
  if (n_epoch < 1 || horizon < 1) {
    throw ValidationError("evaluation needs at least one epoch and one step");
  }
  noise.validate();
  selector.validate(env, actions);

  Rng walk_rng(seeds.walk);
  Rng select_rng(seeds.agent);
  Rng noise_rng(seeds.noise);

  EpisodeLog log;
  log.reserve(static_cast<std::size_t>(n_epoch) * horizon);
  for (int epoch = 0; epoch < n_epoch; ++epoch) {
    UserState user{Zone{static_cast<int>(walk_rng.uniform_int(env.n_x())),
                        static_cast<int>(walk_rng.uniform_int(env.n_y()))}};
    std::optional<Zone> prev_estimate;
    for (int step = 0; step < horizon; ++step) {
      StepRecord record = detail::frozen_step(user.zone, selector, env, actions, noise,
                                              prev_estimate, noise_rng, select_rng);
      record.epoch = epoch;
      record.step = step;
      record.reward = reward(record.error_m, cfg);
      log.push_back(record);
      prev_estimate = record.estimated_zone;
      user = step_random_walk(user, env, walk_rng);
    }
  }
  return log;
}

/// Replays a fixed waypoint sequence (no random walk) through a frozen
/// selector; one record per waypoint.
inline EpisodeLog replay_trajectory(const GridEnvironment& env, const ActionSpace& actions,
                                    const FrozenSelector& selector, const NoiseModel& noise,
                                    std::span<const Zone> waypoints, const RunSeeds& seeds) {
  if (waypoints.empty()) throw ValidationError("replay needs at least one waypoint");
  for (Zone z : waypoints) {
    if (!env.contains(z)) throw ValidationError("waypoint out of bounds");
  }
  noise.validate();
  selector.validate(env, actions);

  Rng select_rng(seeds.agent);
  Rng noise_rng(seeds.noise);

  EpisodeLog log;
  log.reserve(waypoints.size());
  std::optional<Zone> prev_estimate;
  for (std::size_t i = 0; i < waypoints.size(); ++i) {
    StepRecord record = detail::frozen_step(waypoints[i], selector, env, actions, noise,
                                            prev_estimate, noise_rng, select_rng);
    record.epoch = 0;
    record.step = static_cast<int>(i);
    record.reward = 0.0;
    log.push_back(record);
    prev_estimate = record.estimated_zone;
  }
  return log;
}

}  // namespace juno
