// Experiment front-end: train / evaluate / sweep / replay / dump-env.
// Exit codes: 0 success, 1 validation, 2 IO, 3 numerical failure.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "juno/juno.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Overrides {
  std::vector<std::uint64_t> seeds;
  std::string out;
  std::optional<double> alpha, gamma, p_nlos, sigma_toa, nlos_bias, error_threshold;
  std::optional<int> n_epoch, horizon, h_max, n_r, eval_epochs;
  std::optional<std::uint64_t> env_seed, guide_seed;
  std::string epsilon;  // "max:min" or a single fixed value
  std::string guide;    // "random" or a q-table path
  std::string selector;
};

void add_common_overrides(CLI::App* cmd, Overrides& ov) {
  cmd->add_option("--seeds", ov.seeds, "Run seeds (overrides the config list)")->delimiter(',');
  cmd->add_option("--out", ov.out, "Output directory (overrides the config)");
  cmd->add_option("--alpha", ov.alpha, "Learning rate");
  cmd->add_option("--gamma", ov.gamma, "Discount factor");
  cmd->add_option("--epsilon", ov.epsilon, "Exploration schedule, max:min or a fixed value");
  cmd->add_option("--n-epoch", ov.n_epoch, "Training episodes");
  cmd->add_option("--horizon", ov.horizon, "Steps per episode");
  cmd->add_option("--h-max", ov.h_max, "Initial guide-step budget");
  cmd->add_option("--n-r", ov.n_r, "Beacons per localization");
  cmd->add_option("--p-nlos", ov.p_nlos, "Per-link NLoS probability");
  cmd->add_option("--sigma-toa", ov.sigma_toa, "Timing jitter std dev (seconds)");
  cmd->add_option("--nlos-bias", ov.nlos_bias, "Mean NLoS excess delay (seconds)");
  cmd->add_option("--error-threshold", ov.error_threshold, "Acceptable error E_th (meters)");
  cmd->add_option("--env-seed", ov.env_seed, "Environment (channel map) seed");
  cmd->add_option("--guide", ov.guide, "Guide policy: 'random' or a q-table path");
  cmd->add_option("--guide-seed", ov.guide_seed, "Random-guide seed");
  cmd->add_option("--selector", ov.selector, "Selector: policy|nn|random|gdop|wls");
  cmd->add_option("--eval-epochs", ov.eval_epochs, "Evaluation episodes per seed");
}

void parse_epsilon(const std::string& text, juno::AgentConfig& agent) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      agent.epsilon_max = agent.epsilon_min = std::stod(text);
    } else {
      agent.epsilon_max = std::stod(text.substr(0, colon));
      agent.epsilon_min = std::stod(text.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw juno::ValidationError("bad --epsilon value: " + text + " (expected max:min or fixed)");
  }
}

juno::ExperimentConfig resolve_config(const std::string& config_path, const Overrides& ov) {
  juno::ExperimentConfig cfg = juno::load_experiment_config(config_path);
  if (!ov.seeds.empty()) cfg.seeds = ov.seeds;
  if (!ov.out.empty()) cfg.output_dir = ov.out;
  if (ov.alpha) cfg.agent.alpha = *ov.alpha;
  if (ov.gamma) cfg.agent.gamma = *ov.gamma;
  if (!ov.epsilon.empty()) parse_epsilon(ov.epsilon, cfg.agent);
  if (ov.n_epoch) cfg.agent.n_epoch = *ov.n_epoch;
  if (ov.horizon) cfg.agent.horizon_h = *ov.horizon;
  if (ov.h_max) cfg.agent.h_max = *ov.h_max;
  if (ov.n_r) cfg.n_r = *ov.n_r;
  if (ov.p_nlos) cfg.environment.p_nlos = *ov.p_nlos;
  if (ov.sigma_toa) cfg.noise.sigma_toa = *ov.sigma_toa;
  if (ov.nlos_bias) cfg.noise.nlos_bias_mean = *ov.nlos_bias;
  if (ov.error_threshold) cfg.agent.error_threshold = *ov.error_threshold;
  if (ov.env_seed) cfg.environment.seed = *ov.env_seed;
  if (ov.guide_seed) cfg.guide.seed = *ov.guide_seed;
  if (!ov.guide.empty()) {
    if (ov.guide == "random") {
      cfg.guide.kind = juno::GuideSpec::Kind::random;
      cfg.guide.path.clear();
    } else {
      cfg.guide.kind = juno::GuideSpec::Kind::pretrained;
      cfg.guide.path = ov.guide;
    }
  }
  if (!ov.selector.empty()) cfg.selector = juno::selector_from_string(ov.selector);
  if (ov.eval_epochs) cfg.eval_epochs = *ov.eval_epochs;
  cfg.validate();
  return cfg;
}

juno::GuidePolicy make_guide(const juno::ExperimentConfig& cfg, const juno::GridEnvironment& env,
                             const juno::ActionSpace& actions) {
  if (cfg.guide.kind == juno::GuideSpec::Kind::pretrained) {
    juno::GuidePolicy guide{juno::QTable::load_file(cfg.guide.path)};
    juno::check_table_compatible(guide.table, env, actions);
    return guide;
  }
  return juno::random_guide_policy(env, actions, cfg.guide.seed);
}

/// Creates dir, runs body, removes the dir again if body throws.
template <typename Body>
void with_run_dir(const fs::path& dir, Body&& body) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw juno::IoError("cannot create output directory: " + dir.string());
  try {
    body();
  } catch (...) {
    fs::remove_all(dir, ec);
    throw;
  }
}

void write_run_manifest(const fs::path& dir, const std::string& command,
                        juno::ExperimentConfig cfg, std::uint64_t seed) {
  cfg.seeds = {seed};
  json manifest = juno::make_manifest(command, cfg);
  const juno::RunSeeds rs = juno::RunSeeds::from_master(seed);
  manifest["run"] = {{"seed", seed},
                     {"walk_seed", rs.walk},
                     {"agent_seed", rs.agent},
                     {"noise_seed", rs.noise},
                     {"environment_seed", cfg.environment.seed},
                     {"guide_seed", cfg.guide.seed}};
  juno::write_manifest((dir / "manifest.json").string(), manifest);
}

struct TrainRunMetrics {
  juno::RunSummary summary;
  std::vector<double> per_epoch_mean;
};

TrainRunMetrics train_one_seed(const juno::ExperimentConfig& cfg, const juno::GridEnvironment& env,
                               const juno::ActionSpace& actions, const juno::GuidePolicy& guide,
                               std::uint64_t seed, const fs::path& run_dir) {
  TrainRunMetrics metrics;
  with_run_dir(run_dir, [&] {
    write_run_manifest(run_dir, "train", cfg, seed);
    const juno::TrainResult result =
        juno::train(env, actions, cfg.agent, cfg.noise, guide, juno::RunSeeds::from_master(seed));
    result.qtable.save_file((run_dir / "qtable.txt").string());
    juno::write_episode_log_csv((run_dir / "episode_log.csv").string(), result.log);
    metrics.per_epoch_mean = juno::mean_error_per_epoch(result.log);
    juno::write_errors_csv((run_dir / "errors.csv").string(), metrics.per_epoch_mean);
    juno::write_rewards_csv((run_dir / "rewards.csv").string(),
                            juno::cumulative_reward(result.log));
    metrics.summary = juno::summarize(result.log, juno::steady_state_window(cfg.agent.n_epoch));
    json s{{"seed", seed},
           {"rmse_m", metrics.summary.rmse_m},
           {"mean_error_m", metrics.summary.mean_error_m},
           {"steady_window", {metrics.summary.steady_window.begin, metrics.summary.steady_window.end}}};
    juno::write_manifest((run_dir / "summary.json").string(), s);
    std::cout << "train seed " << seed << ": steady mean error " << metrics.summary.mean_error_m
              << " m, rmse " << metrics.summary.rmse_m << " m\n";
  });
  return metrics;
}

int cmd_train(const std::string& config_path, const Overrides& ov) {
  const juno::ExperimentConfig cfg = resolve_config(config_path, ov);
  const juno::GridEnvironment env = juno::build_environment(cfg.environment);
  const juno::ActionSpace actions(env.n_beacons(), cfg.n_r);
  const juno::GuidePolicy guide = make_guide(cfg, env, actions);
  for (std::uint64_t seed : cfg.seeds) {
    train_one_seed(cfg, env, actions, guide, seed, fs::path(cfg.output_dir) / ("run-" + std::to_string(seed)));
  }
  return 0;
}

int cmd_evaluate(const std::string& config_path, const std::string& qtable_path,
                 const Overrides& ov) {
  const juno::ExperimentConfig cfg = resolve_config(config_path, ov);
  const juno::GridEnvironment env = juno::build_environment(cfg.environment);
  const juno::ActionSpace actions(env.n_beacons(), cfg.n_r);

  std::optional<juno::QTable> table;
  if (cfg.selector == juno::SelectorKind::policy) {
    if (qtable_path.empty()) {
      throw juno::ValidationError("evaluate with the policy selector needs --qtable");
    }
    table = juno::QTable::load_file(qtable_path);
  }
  juno::FrozenSelector selector{cfg.selector, table ? &*table : nullptr};
  selector.validate(env, actions);

  const fs::path out_dir(cfg.output_dir);
  with_run_dir(out_dir, [&] {
    json manifest = juno::make_manifest("evaluate", cfg);
    if (!qtable_path.empty()) manifest["qtable"] = qtable_path;
    juno::write_manifest((out_dir / "manifest.json").string(), manifest);

    std::vector<double> pooled_errors;
    json per_seed = json::array();
    for (std::uint64_t seed : cfg.seeds) {
      const juno::EpisodeLog log =
          juno::evaluate_policy(env, actions, selector, cfg.noise, cfg.agent, cfg.eval_epochs,
                                cfg.agent.horizon_h, juno::RunSeeds::from_master(seed));
      const fs::path seed_dir = out_dir / ("eval-" + std::to_string(seed));
      fs::create_directories(seed_dir);
      juno::write_episode_log_csv((seed_dir / "episode_log.csv").string(), log);
      std::vector<double> errors;
      errors.reserve(log.size());
      for (const auto& rec : log) errors.push_back(rec.error_m);
      juno::write_ecdf_csv((seed_dir / "ecdf.csv").string(), juno::ecdf(errors));
      const juno::EpochWindow all{0, cfg.eval_epochs};
      per_seed.push_back({{"seed", seed},
                          {"rmse_m", juno::rmse(log, all)},
                          {"mean_error_m", juno::mean_error(log, all)}});
      pooled_errors.insert(pooled_errors.end(), errors.begin(), errors.end());
    }
    juno::write_ecdf_csv((out_dir / "ecdf.csv").string(), juno::ecdf(pooled_errors));
    double sum = 0.0, sum_sq = 0.0;
    for (double e : pooled_errors) {
      sum += e;
      sum_sq += e * e;
    }
    const double n = static_cast<double>(pooled_errors.size());
    json summary{{"selector", juno::to_string(cfg.selector)},
                 {"rmse_m", std::sqrt(sum_sq / n)},
                 {"mean_error_m", sum / n},
                 {"steps", pooled_errors.size()},
                 {"per_seed", per_seed}};
    juno::write_manifest((out_dir / "summary.json").string(), summary);
    std::cout << "evaluate (" << juno::to_string(cfg.selector) << "): mean error " << sum / n
              << " m, rmse " << std::sqrt(sum_sq / n) << " m over " << pooled_errors.size()
              << " steps\n";
  });
  return 0;
}

void apply_sweep_value(juno::ExperimentConfig& cfg, const std::string& param,
                       const std::string& value) {
  try {
    if (param == "alpha") {
      cfg.agent.alpha = std::stod(value);
    } else if (param == "epsilon") {
      parse_epsilon(value, cfg.agent);
    } else if (param == "h_max") {
      cfg.agent.h_max = std::stoi(value);
    } else if (param == "p_nlos") {
      cfg.environment.p_nlos = std::stod(value);
    } else if (param == "sigma_toa") {
      cfg.noise.sigma_toa = std::stod(value);
    } else if (param == "n_r") {
      cfg.n_r = std::stoi(value);
    } else {
      throw juno::ValidationError(
          "unknown sweep parameter: " + param +
          " (expected alpha|epsilon|h_max|p_nlos|sigma_toa|n_r)");
    }
  } catch (const juno::ValidationError&) {
    throw;
  } catch (const std::exception&) {
    throw juno::ValidationError("bad value for sweep parameter " + param + ": " + value);
  }
}

std::string sanitize_for_path(std::string text) {
  for (char& c : text) {
    if (c == ':' || c == '/' || c == '\\' || c == ' ') c = '_';
  }
  return text;
}

int cmd_sweep(const std::string& config_path, const std::string& param,
              const std::vector<std::string>& values, double threshold_m, const Overrides& ov) {
  if (values.empty()) throw juno::ValidationError("sweep needs at least one value");
  const juno::ExperimentConfig base = resolve_config(config_path, ov);
  const fs::path out_dir(base.output_dir);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw juno::IoError("cannot create output directory: " + out_dir.string());

  std::ofstream merged(out_dir / "sweep_summary.csv");
  if (!merged) throw juno::IoError("cannot open sweep_summary.csv for writing");
  merged << "param,value,seed,mean_error_final_window_m,rmse_steady_m,epochs_to_threshold\n";

  for (const std::string& value : values) {
    juno::ExperimentConfig cfg = base;
    apply_sweep_value(cfg, param, value);
    cfg.validate();
    const juno::GridEnvironment env = juno::build_environment(cfg.environment);
    const juno::ActionSpace actions(env.n_beacons(), cfg.n_r);
    const juno::GuidePolicy guide = make_guide(cfg, env, actions);
    for (std::uint64_t seed : cfg.seeds) {
      const fs::path run_dir =
          out_dir / (param + "-" + sanitize_for_path(value)) / ("run-" + std::to_string(seed));
      juno::ExperimentConfig run_cfg = cfg;
      run_cfg.output_dir = run_dir.parent_path().string();
      const TrainRunMetrics metrics = train_one_seed(run_cfg, env, actions, guide, seed, run_dir);
      char line[160];
      std::snprintf(line, sizeof line, "%.12g,%.12g,%d", metrics.summary.mean_error_m,
                    metrics.summary.rmse_m,
                    juno::epochs_to_reach(metrics.per_epoch_mean, threshold_m));
      merged << param << ',' << value << ',' << seed << ',' << line << '\n';
    }
  }
  if (!merged) throw juno::IoError("failed while writing sweep_summary.csv");
  std::cout << "sweep over " << param << " complete: " << values.size() << " values x "
            << base.seeds.size() << " seeds\n";
  return 0;
}

int cmd_replay(const std::string& config_path, const std::string& qtable_path,
               const std::string& waypoint_path, int random_waypoints,
               const std::string& residuals_path, const Overrides& ov) {
  const juno::ExperimentConfig cfg = resolve_config(config_path, ov);
  const juno::GridEnvironment env = juno::build_environment(cfg.environment);
  const juno::ActionSpace actions(env.n_beacons(), cfg.n_r);

  std::vector<juno::Zone> waypoints;
  if (!waypoint_path.empty()) {
    waypoints = juno::load_waypoints_csv(waypoint_path);
  } else if (random_waypoints > 0) {
    juno::Rng walk_rng(juno::derive_seed(cfg.seeds.front(), juno::Stream::walk));
    juno::UserState user{juno::Zone{static_cast<int>(walk_rng.uniform_int(env.n_x())),
                                    static_cast<int>(walk_rng.uniform_int(env.n_y()))}};
    for (int i = 0; i < random_waypoints; ++i) {
      waypoints.push_back(user.zone);
      user = juno::step_random_walk(user, env, walk_rng);
    }
  } else {
    throw juno::ValidationError("replay needs --waypoints or --random-waypoints");
  }

  std::optional<juno::QTable> table;
  if (cfg.selector == juno::SelectorKind::policy) {
    if (qtable_path.empty()) {
      throw juno::ValidationError("replay with the policy selector needs --qtable");
    }
    table = juno::QTable::load_file(qtable_path);
  }
  const juno::FrozenSelector selector{cfg.selector, table ? &*table : nullptr};

  const fs::path out_dir(cfg.output_dir);
  with_run_dir(out_dir, [&] {
    juno::write_manifest((out_dir / "manifest.json").string(),
                         juno::make_manifest("replay", cfg));
    const juno::EpisodeLog log =
        juno::replay_trajectory(env, actions, selector, cfg.noise, waypoints,
                                juno::RunSeeds::from_master(cfg.seeds.front()));
    juno::write_trajectory_csv((out_dir / "trajectory.csv").string(), log, env);
    if (!residuals_path.empty()) {
      // Residual surface of the full-beacon measurement set at the first
      // waypoint, for eyeballing the solver's objective.
      juno::Rng noise_rng(juno::derive_seed(cfg.seeds.front(), juno::Stream::noise));
      const auto toas = juno::simulate_all(waypoints.front(), env, cfg.noise, noise_rng);
      juno::write_residual_surface_csv(residuals_path, env, juno::residual_surface(toas, env));
    }
    double total_error = 0.0;
    for (const auto& rec : log) total_error += rec.error_m;
    std::cout << "replay (" << juno::to_string(cfg.selector) << "): " << log.size()
              << " waypoints, mean error " << total_error / log.size() << " m\n";
  });
  return 0;
}

int cmd_dump_env(const std::string& config_path, const std::string& out_path,
                 const std::string& toa_samples_path, const Overrides& ov) {
  const juno::ExperimentConfig cfg = resolve_config(config_path, ov);
  const juno::GridEnvironment env = juno::build_environment(cfg.environment);
  juno::save_environment_file(out_path, env);
  if (!toa_samples_path.empty()) {
    juno::Rng noise_rng(juno::derive_seed(cfg.seeds.front(), juno::Stream::noise));
    juno::write_toa_samples_csv(toa_samples_path, env, cfg.noise, noise_rng);
  }
  std::cout << "environment snapshot written to " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"UWB TDoA anchor-selection simulator and training harness"};
  app.require_subcommand(1);

  std::string config_path, qtable_path, waypoint_path, residuals_path, env_out, toa_samples_path;
  std::string sweep_param;
  std::vector<std::string> sweep_values;
  double sweep_threshold = 1.5;
  int random_waypoints = 0;
  Overrides ov;

  CLI::App* train = app.add_subcommand("train", "Train the anchor-selection policy");
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  add_common_overrides(train, ov);

  CLI::App* evaluate = app.add_subcommand("evaluate", "Evaluate a frozen policy or baseline");
  evaluate->add_option("--config", config_path, "Experiment config (JSON)")->required();
  evaluate->add_option("--qtable", qtable_path, "Trained q-table file");
  add_common_overrides(evaluate, ov);

  CLI::App* sweep = app.add_subcommand("sweep", "Train across a parameter sweep");
  sweep->add_option("--config", config_path, "Experiment config (JSON)")->required();
  sweep->add_option("--param", sweep_param, "alpha|epsilon|h_max|p_nlos|sigma_toa|n_r")
      ->required();
  sweep->add_option("--values", sweep_values, "Sweep values")->required()->delimiter(',');
  sweep->add_option("--threshold", sweep_threshold,
                    "Mean-error threshold for epochs_to_threshold (meters)");
  add_common_overrides(sweep, ov);

  CLI::App* replay = app.add_subcommand("replay", "Replay a fixed trajectory");
  replay->add_option("--config", config_path, "Experiment config (JSON)")->required();
  replay->add_option("--qtable", qtable_path, "Trained q-table file");
  replay->add_option("--waypoints", waypoint_path, "Waypoint CSV (x,y per line)");
  replay->add_option("--random-waypoints", random_waypoints, "Generate N random-walk waypoints");
  replay->add_option("--dump-residuals", residuals_path,
                     "Write the first waypoint's residual surface CSV here");
  add_common_overrides(replay, ov);

  CLI::App* dump_env = app.add_subcommand("dump-env", "Write the sampled world snapshot");
  dump_env->add_option("--config", config_path, "Experiment config (JSON)")->required();
  dump_env->add_option("--out", env_out, "Snapshot output path")->required();
  dump_env->add_option("--toa-samples", toa_samples_path,
                       "Also dump one ToA sample per (zone, beacon) as CSV");
  dump_env->add_option("--p-nlos", ov.p_nlos, "Per-link NLoS probability");
  dump_env->add_option("--env-seed", ov.env_seed, "Environment (channel map) seed");
  dump_env->add_option("--sigma-toa", ov.sigma_toa, "Timing jitter std dev (seconds)");
  dump_env->add_option("--nlos-bias", ov.nlos_bias, "Mean NLoS excess delay (seconds)");
  dump_env->add_option("--seeds", ov.seeds, "Run seeds (overrides the config list)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, ov);
    if (evaluate->parsed()) return cmd_evaluate(config_path, qtable_path, ov);
    if (sweep->parsed()) return cmd_sweep(config_path, sweep_param, sweep_values, sweep_threshold, ov);
    if (replay->parsed()) {
      return cmd_replay(config_path, qtable_path, waypoint_path, random_waypoints, residuals_path,
                        ov);
    }
    if (dump_env->parsed()) return cmd_dump_env(config_path, env_out, toa_samples_path, ov);
  } catch (const juno::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const juno::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const juno::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
