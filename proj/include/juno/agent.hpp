#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
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

/// Learner hyperparameters. horizon_h is the steps-per-episode H; h_max is
/// the guide-step budget at epoch 0 and decays linearly to 0 over training.
/// The default discount is small: anchor choice never influences where the
/// user walks next, so large discounts only feed bootstrap noise into the
/// action ranking.
struct AgentConfig {
  double alpha = 0.1;
  double gamma = 0.2;
  double epsilon_max = 1.0;
  double epsilon_min = 0.1;
  int n_epoch = 100;
  int horizon_h = 100;
  int h_max = 0;
  double error_threshold = 1.0;  // meters
  double reward_cap = 100.0;

  void validate() const {
    if (!(alpha > 0.0) || alpha > 1.0) throw ValidationError("alpha must lie in (0, 1]");
    if (gamma < 0.0 || gamma > 1.0) throw ValidationError("gamma must lie in [0, 1]");
    if (epsilon_max < 0.0 || epsilon_max > 1.0 || epsilon_min < 0.0 || epsilon_min > 1.0) {
      throw ValidationError("epsilon bounds must lie in [0, 1]");
    }
    if (epsilon_min > epsilon_max) throw ValidationError("epsilon_min must be <= epsilon_max");
    if (n_epoch < 1) throw ValidationError("n_epoch must be at least 1");
    if (horizon_h < 1) throw ValidationError("horizon must be at least 1");
    if (h_max < 0 || h_max > horizon_h) {
      throw ValidationError("h_max must lie in [0, horizon]");
    }
    if (error_threshold < 0.0) throw ValidationError("error_threshold must be >= 0");
    if (!(reward_cap > 0.0)) throw ValidationError("reward_cap must be positive");
  }
};

/// Fixed prior policy consulted for the first h steps of each episode. The
/// table is either filled with uniform random values or loaded from a prior
/// run; in both cases the agent follows its greedy action.
struct GuidePolicy {
  QTable table;
};

inline GuidePolicy random_guide_policy(const GridEnvironment& env, const ActionSpace& actions,
                                       std::uint64_t seed) {
  QTable table(env.n_zones(), actions.n_actions(),
               QTableMeta{env.n_x(), env.n_y(), env.n_beacons(), actions.n_r(), seed});
  Rng rng(derive_seed(seed, Stream::guide));
  table.fill_uniform(rng);
  return GuidePolicy{std::move(table)};
}

/// Checks a (guide or resumed) table against the world it is about to drive.
/// Any fingerprint mismatch is a hard error; tables are never reshaped.
inline void check_table_compatible(const QTable& table, const GridEnvironment& env,
                                   const ActionSpace& actions) {
  const QTableMeta want{env.n_x(), env.n_y(), env.n_beacons(), actions.n_r(), 0};
  const QTableMeta& have = table.meta();
  if (have.n_beacons != want.n_beacons) {
    throw ValidationError("q-table beacon count " + std::to_string(have.n_beacons) +
                          " does not match environment beacon count " +
                          std::to_string(want.n_beacons));
  }
  if (have.n_r != want.n_r) {
    throw ValidationError("q-table n_r " + std::to_string(have.n_r) +
                          " does not match configured n_r " + std::to_string(want.n_r));
  }
  if (have.n_x != want.n_x || have.n_y != want.n_y ||
      table.n_states() != env.n_zones()) {
    throw ValidationError("q-table zone grid " + std::to_string(have.n_x) + "x" +
                          std::to_string(have.n_y) + " does not match environment " +
                          std::to_string(want.n_x) + "x" + std::to_string(want.n_y));
  }
  if (table.n_actions() != actions.n_actions()) {
    throw ValidationError("q-table action count does not match the action space");
  }
}

/// Reward for one localization attempt: 1/error below the acceptable
/// threshold (capped, with the cap returned for a perfect hit), the negated
/// error above it.
inline double reward(double error_m, const AgentConfig& cfg) {
  if (error_m < 0.0) throw ValidationError("location error must be >= 0");
  if (error_m <= cfg.error_threshold) {
    if (error_m == 0.0) return cfg.reward_cap;
    return std::min(1.0 / error_m, cfg.reward_cap);
  }
  return -error_m;
}

/// Euclidean distance between two zone centers, in meters.
inline double location_error(Zone true_zone, Zone estimated_zone, const GridEnvironment& env) {
  return distance(env.zone_center(true_zone), env.zone_center(estimated_zone));
}

/// Guide-step budget for an epoch: linear decay from h_max at epoch 0 to 0
/// at the final epoch, rounded to the nearest step. A single-epoch run is
/// its own final epoch, so h is 0 there.
inline int guide_step_schedule(int epoch, const AgentConfig& cfg) {
  if (epoch < 0) throw ValidationError("epoch must be >= 0");
  if (cfg.n_epoch <= 1 || epoch >= cfg.n_epoch) return 0;
  const double fraction = 1.0 - static_cast<double>(epoch) / (cfg.n_epoch - 1);
  return static_cast<int>(std::lround(cfg.h_max * fraction));
}

/// Exploration rate for an epoch: epsilon_max minus epoch steps of
/// (epsilon_max - epsilon_min) / n_epoch, floored at epsilon_min.
inline double epsilon_schedule(int epoch, const AgentConfig& cfg) {
  if (epoch < 0) throw ValidationError("epoch must be >= 0");
  const double delta = (cfg.epsilon_max - cfg.epsilon_min) / cfg.n_epoch;
  return std::max(cfg.epsilon_min, cfg.epsilon_max - epoch * delta);
}

/// Which policy produced an action.
enum class PolicyUse : std::uint8_t { guide, explore_greedy, explore_random };

inline const char* to_string(PolicyUse p) {
  switch (p) {
    case PolicyUse::guide: return "guide";
    case PolicyUse::explore_greedy: return "explore-greedy";
    case PolicyUse::explore_random: return "explore-random";
  }
  return "?";
}

struct ActionChoice {
  int action{};
  PolicyUse policy_used{};
};

/// Jump-start action selection: the guide table's greedy action for the
/// first h steps of an episode, epsilon-greedy on the live table afterwards.
/// Greedy ties resolve to the lowest action index in both branches.
inline ActionChoice select_action(Zone state, int step, int h, const QTable& qtable,
                                  const GuidePolicy& guide, double epsilon,
                                  const GridEnvironment& env, Rng& rng) {
  const int s = env.zone_index(state);
  if (step < h) {
    return ActionChoice{guide.table.greedy_action(s), PolicyUse::guide};
  }
  if (rng.bernoulli(epsilon)) {
    return ActionChoice{static_cast<int>(rng.uniform_int(qtable.n_actions())),
                        PolicyUse::explore_random};
  }
  return ActionChoice{qtable.greedy_action(s), PolicyUse::explore_greedy};
}

/// One Q-learning backup:
///   Q(s,a) <- (1 - alpha) Q(s,a) + alpha (r + gamma max_a' Q(s',a')).
inline void update_q(QTable& qtable, int state, int action, double reward_value, int next_state,
                     const AgentConfig& cfg) {
  if (!std::isfinite(reward_value)) throw NumericError("reward must be finite");
  const double target = reward_value + cfg.gamma * qtable.max_value(next_state);
  const double updated = (1.0 - cfg.alpha) * qtable.at(state, action) + cfg.alpha * target;
  if (!std::isfinite(updated)) throw NumericError("q-update produced a non-finite value");
  qtable.set(state, action, updated);
}

/// Per-step training record; every metric downstream is computed from these.
struct StepRecord {
  int epoch{};
  int step{};
  Zone true_zone{};
  int action{};
  Zone estimated_zone{};
  double error_m{};
  double reward{};
  PolicyUse policy_used{};
};

using EpisodeLog = std::vector<StepRecord>;

/// Seeds for the independent randomness streams of one run.
struct RunSeeds {
  std::uint64_t walk{};
  std::uint64_t agent{};
  std::uint64_t noise{};

  static RunSeeds from_master(std::uint64_t master) {
    return RunSeeds{derive_seed(master, Stream::walk), derive_seed(master, Stream::agent),
                    derive_seed(master, Stream::noise)};
  }
};

struct TrainResult {
  QTable qtable;
  EpisodeLog log;
};

/// Full training run: n_epoch episodes of horizon_h steps each. Per step the
/// agent picks a beacon subset, observes its arrival times, solves for the
/// zone (previous estimate as tie anchor, reset each episode), collects the
/// reward, draws the next user zone and backs the value up. Start zones are
/// uniform random from the walk stream. Deterministic given seeds.
inline TrainResult train(const GridEnvironment& env, const ActionSpace& actions,
                         const AgentConfig& cfg, const NoiseModel& noise,
                         const GuidePolicy& guide, const RunSeeds& seeds) {
  cfg.validate();
  noise.validate();
  check_table_compatible(guide.table, env, actions);

  Rng walk_rng(seeds.walk);
  Rng agent_rng(seeds.agent);
  Rng noise_rng(seeds.noise);

  QTable qtable(env.n_zones(), actions.n_actions(),
                QTableMeta{env.n_x(), env.n_y(), env.n_beacons(), actions.n_r(), seeds.agent});
  EpisodeLog log;
  log.reserve(static_cast<std::size_t>(cfg.n_epoch) * cfg.horizon_h);

  for (int epoch = 0; epoch < cfg.n_epoch; ++epoch) {
    const int h = guide_step_schedule(epoch, cfg);
    const double epsilon = epsilon_schedule(epoch, cfg);
    UserState user{Zone{static_cast<int>(walk_rng.uniform_int(env.n_x())),
                        static_cast<int>(walk_rng.uniform_int(env.n_y()))}};
    std::optional<Zone> prev_estimate;

    for (int step = 0; step < cfg.horizon_h; ++step) {
      const ActionChoice choice =
          select_action(user.zone, step, h, qtable, guide, epsilon, env, agent_rng);
      const auto subset = actions.subset(choice.action);
      const auto measurements = simulate_subset(user.zone, subset, env, noise, noise_rng);
      const PositionEstimate estimate = solve_grid(measurements, env, prev_estimate);
      const double error_m = location_error(user.zone, estimate.zone, env);
      const double r = reward(error_m, cfg);
      const UserState next = step_random_walk(user, env, walk_rng);
      update_q(qtable, env.zone_index(user.zone), choice.action, r, env.zone_index(next.zone),
               cfg);
      log.push_back(StepRecord{epoch, step, user.zone, choice.action, estimate.zone, error_m, r,
                               choice.policy_used});
      prev_estimate = estimate.zone;
      user = next;
    }
  }
  return TrainResult{std::move(qtable), std::move(log)};
}

}  // namespace juno
