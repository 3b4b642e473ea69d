#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "juno/agent.hpp"
#include "juno/common.hpp"
#include "juno/grid.hpp"
#include "juno/measurement.hpp"
#include "juno/selectors.hpp"

namespace juno {

/// Where the guide policy comes from: a fresh random table (seeded) or a
/// serialized table from a prior run.
struct GuideSpec {
  enum class Kind { random, pretrained };
  Kind kind = Kind::random;
  std::uint64_t seed = 1234;
  std::string path;
};

/// Everything one experiment needs, as read from the config file. Flags may
/// override individual fields; the resolved struct is what lands in the run
/// manifest.
struct ExperimentConfig {
  EnvironmentConfig environment;
  NoiseModel noise;
  AgentConfig agent;
  int n_r = 2;
  GuideSpec guide;
  SelectorKind selector = SelectorKind::policy;
  std::vector<std::uint64_t> seeds = {1};
  int eval_epochs = 10;
  std::string output_dir = "runs/out";

  void validate() const {
    agent.validate();
    noise.validate();
    if (environment.p_nlos < 0.0 || environment.p_nlos > 1.0) {
      throw ValidationError("p_nlos must lie in [0, 1]");
    }
    if (n_r < 2) throw ValidationError("n_r must be at least 2 for TDoA localization");
    const int n_beacons = environment.beacon_positions.empty()
                              ? environment.beacon_count
                              : static_cast<int>(environment.beacon_positions.size());
    if (n_r > n_beacons) throw ValidationError("n_r exceeds the number of beacons");
    if (seeds.empty()) throw ValidationError("seeds list must not be empty");
    if (eval_epochs < 1) throw ValidationError("eval_epochs must be at least 1");
    if (guide.kind == GuideSpec::Kind::pretrained && guide.path.empty()) {
      throw ValidationError("pretrained guide needs a path");
    }
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, std::initializer_list<const char*> known,
                                const std::string& where) {
  for (const auto& item : j.items()) {
    bool found = false;
    for (const char* k : known) {
      if (item.key() == k) {
        found = true;
        break;
      }
    }
    if (!found) throw ValidationError("unknown config key \"" + item.key() + "\" in " + where);
  }
}

}  // namespace detail

inline void from_json(const nlohmann::json& j, EnvironmentConfig& c) {
  detail::reject_unknown_keys(
      j, {"n_x", "n_y", "cell_size", "beacon_positions", "beacon_count", "p_nlos", "seed"},
      "environment");
  c.n_x = j.value("n_x", c.n_x);
  c.n_y = j.value("n_y", c.n_y);
  c.cell_size = j.value("cell_size", c.cell_size);
  c.beacon_count = j.value("beacon_count", c.beacon_count);
  c.p_nlos = j.value("p_nlos", c.p_nlos);
  c.seed = j.value("seed", c.seed);
  if (j.contains("beacon_positions")) {
    c.beacon_positions.clear();
    for (const auto& p : j.at("beacon_positions")) {
      if (!p.is_array() || p.size() != 2) {
        throw ValidationError("beacon_positions entries must be [x, y] pairs");
      }
      c.beacon_positions.push_back(Vec2{p[0].get<double>(), p[1].get<double>()});
    }
  }
}

inline void to_json(nlohmann::json& j, const EnvironmentConfig& c) {
  j = nlohmann::json{{"n_x", c.n_x},       {"n_y", c.n_y},   {"cell_size", c.cell_size},
                     {"beacon_count", c.beacon_count}, {"p_nlos", c.p_nlos}, {"seed", c.seed}};
  if (!c.beacon_positions.empty()) {
    nlohmann::json positions = nlohmann::json::array();
    for (const Vec2& p : c.beacon_positions) positions.push_back({p.x, p.y});
    j["beacon_positions"] = positions;
  }
}

inline void from_json(const nlohmann::json& j, NoiseModel& n) {
  detail::reject_unknown_keys(j, {"sigma_toa_s", "nlos_bias_mean_s"}, "noise");
  n.sigma_toa = j.value("sigma_toa_s", n.sigma_toa);
  n.nlos_bias_mean = j.value("nlos_bias_mean_s", n.nlos_bias_mean);
}

inline void to_json(nlohmann::json& j, const NoiseModel& n) {
  j = nlohmann::json{{"sigma_toa_s", n.sigma_toa}, {"nlos_bias_mean_s", n.nlos_bias_mean}};
}

inline void from_json(const nlohmann::json& j, AgentConfig& a) {
  detail::reject_unknown_keys(j,
                              {"alpha", "gamma", "epsilon_max", "epsilon_min", "n_epoch",
                               "horizon", "h_max", "error_threshold_m", "reward_cap"},
                              "agent");
  a.alpha = j.value("alpha", a.alpha);
  a.gamma = j.value("gamma", a.gamma);
  a.epsilon_max = j.value("epsilon_max", a.epsilon_max);
  a.epsilon_min = j.value("epsilon_min", a.epsilon_min);
  a.n_epoch = j.value("n_epoch", a.n_epoch);
  a.horizon_h = j.value("horizon", a.horizon_h);
  a.h_max = j.value("h_max", a.h_max);
  a.error_threshold = j.value("error_threshold_m", a.error_threshold);
  a.reward_cap = j.value("reward_cap", a.reward_cap);
}

inline void to_json(nlohmann::json& j, const AgentConfig& a) {
  j = nlohmann::json{{"alpha", a.alpha},
                     {"gamma", a.gamma},
                     {"epsilon_max", a.epsilon_max},
                     {"epsilon_min", a.epsilon_min},
                     {"n_epoch", a.n_epoch},
                     {"horizon", a.horizon_h},
                     {"h_max", a.h_max},
                     {"error_threshold_m", a.error_threshold},
                     {"reward_cap", a.reward_cap}};
}

inline void from_json(const nlohmann::json& j, GuideSpec& g) {
  detail::reject_unknown_keys(j, {"kind", "seed", "path"}, "guide");
  const std::string kind = j.value("kind", std::string("random"));
  if (kind == "random") {
    g.kind = GuideSpec::Kind::random;
  } else if (kind == "pretrained") {
    g.kind = GuideSpec::Kind::pretrained;
  } else {
    throw ValidationError("guide.kind must be \"random\" or \"pretrained\"");
  }
  g.seed = j.value("seed", g.seed);
  g.path = j.value("path", g.path);
}

inline void to_json(nlohmann::json& j, const GuideSpec& g) {
  j = nlohmann::json{{"kind", g.kind == GuideSpec::Kind::random ? "random" : "pretrained"},
                     {"seed", g.seed}};
  if (!g.path.empty()) j["path"] = g.path;
}

inline void from_json(const nlohmann::json& j, ExperimentConfig& c) {
  detail::reject_unknown_keys(j,
                              {"environment", "noise", "agent", "n_r", "guide", "selector",
                               "seeds", "eval_epochs", "output_dir"},
                              "config root");
  if (j.contains("environment")) j.at("environment").get_to(c.environment);
  if (j.contains("noise")) j.at("noise").get_to(c.noise);
  if (j.contains("agent")) j.at("agent").get_to(c.agent);
  c.n_r = j.value("n_r", c.n_r);
  if (j.contains("guide")) j.at("guide").get_to(c.guide);
  if (j.contains("selector")) c.selector = selector_from_string(j.at("selector").get<std::string>());
  if (j.contains("seeds")) c.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
  c.eval_epochs = j.value("eval_epochs", c.eval_epochs);
  c.output_dir = j.value("output_dir", c.output_dir);
}

inline void to_json(nlohmann::json& j, const ExperimentConfig& c) {
  j = nlohmann::json{{"environment", c.environment},
                     {"noise", c.noise},
                     {"agent", c.agent},
                     {"n_r", c.n_r},
                     {"guide", c.guide},
                     {"selector", to_string(c.selector)},
                     {"seeds", c.seeds},
                     {"eval_epochs", c.eval_epochs},
                     {"output_dir", c.output_dir}};
}

/// Reads a config file. A run manifest is also accepted: its embedded
/// resolved config is used, which is what makes re-runs reproducible from
/// the manifest alone.
inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + " is not valid JSON: " + e.what());
  }
  ExperimentConfig config;
  try {
    if (j.contains("format") && j.at("format") == "juno-manifest") {
      j.at("config").get_to(config);
    } else {
      j.get_to(config);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("config file " + path + ": " + e.what());
  }
  return config;
}

}  // namespace juno
