#pragma once

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "juno/agent.hpp"
#include "juno/common.hpp"
#include "juno/config.hpp"
#include "juno/grid.hpp"
#include "juno/measurement.hpp"
#include "juno/metrics.hpp"

namespace juno {

namespace detail {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open file for writing: " + path);
  return out;
}

}  // namespace detail

// --- CSV outputs -----------------------------------------------------------

inline void write_episode_log_csv(const std::string& path, const EpisodeLog& log) {
  auto out = detail::open_out(path);
  out << "epoch,step,true_x,true_y,action,est_x,est_y,error_m,reward,policy_used\n";
  for (const StepRecord& r : log) {
    out << r.epoch << ',' << r.step << ',' << r.true_zone.x << ',' << r.true_zone.y << ','
        << r.action << ',' << r.estimated_zone.x << ',' << r.estimated_zone.y << ','
        << detail::fmt(r.error_m) << ',' << detail::fmt(r.reward) << ',' << to_string(r.policy_used)
        << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_errors_csv(const std::string& path, const std::vector<double>& per_epoch_mean) {
  auto out = detail::open_out(path);
  out << "epoch,mean_error_m\n";
  for (std::size_t e = 0; e < per_epoch_mean.size(); ++e) {
    out << e << ',' << detail::fmt(per_epoch_mean[e]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_rewards_csv(const std::string& path, const std::vector<double>& per_epoch_sum) {
  auto out = detail::open_out(path);
  out << "epoch,cum_reward\n";
  for (std::size_t e = 0; e < per_epoch_sum.size(); ++e) {
    out << e << ',' << detail::fmt(per_epoch_sum[e]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_ecdf_csv(const std::string& path, const EcdfCurve& curve) {
  auto out = detail::open_out(path);
  out << "error_m,prob\n";
  for (std::size_t i = 0; i < curve.errors.size(); ++i) {
    out << detail::fmt(curve.errors[i]) << ',' << detail::fmt(curve.probs[i]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

/// Paired true/estimated positions in meters (zone centers), for plotting.
inline void write_trajectory_csv(const std::string& path, const EpisodeLog& log,
                                 const GridEnvironment& env) {
  auto out = detail::open_out(path);
  out << "step,true_x,true_y,est_x,est_y\n";
  for (const StepRecord& r : log) {
    const Vec2 t = env.zone_center(r.true_zone);
    const Vec2 e = env.zone_center(r.estimated_zone);
    out << r.step << ',' << detail::fmt(t.x) << ',' << detail::fmt(t.y) << ','
        << detail::fmt(e.x) << ',' << detail::fmt(e.y) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

/// Raw (zone, beacon, toa, condition) samples, one per pair — the debug view
/// of the measurement layer.
inline void write_toa_samples_csv(const std::string& path, const GridEnvironment& env,
                                  const NoiseModel& noise, Rng& rng) {
  auto out = detail::open_out(path);
  out << "zone_x,zone_y,beacon,toa_s,condition\n";
  for (int z = 0; z < env.n_zones(); ++z) {
    const Zone zone = env.zone_at(z);
    for (const Beacon& b : env.beacons()) {
      const ToaMeasurement m = simulate_toa(zone, b, env, noise, rng);
      const bool nlos = env.channel_map().at(z, b.id) == ChannelCondition::nlos;
      out << zone.x << ',' << zone.y << ',' << b.id << ',' << detail::fmt_full(m.toa) << ','
          << (nlos ? "nlos" : "los") << '\n';
    }
  }
  if (!out) throw IoError("failed while writing " + path);
}

inline void write_residual_surface_csv(const std::string& path, const GridEnvironment& env,
                                       const std::vector<double>& surface) {
  auto out = detail::open_out(path);
  out << "zone_x,zone_y,residual_s2\n";
  for (int z = 0; z < env.n_zones(); ++z) {
    const Zone zone = env.zone_at(z);
    out << zone.x << ',' << zone.y << ',' << detail::fmt_full(surface[z]) << '\n';
  }
  if (!out) throw IoError("failed while writing " + path);
}

// --- environment snapshot ----------------------------------------------------
// Text snapshot of a built world, channel map included, so an experiment can
// pin the exact world it ran in.

inline void save_environment(std::ostream& out, const GridEnvironment& env) {
  out << "juno-env 1\n";
  out << "n_x " << env.n_x() << "\n";
  out << "n_y " << env.n_y() << "\n";
  out << "cell_size " << detail::fmt_full(env.cell_size()) << "\n";
  out << "n_beacons " << env.n_beacons() << "\n";
  for (const Beacon& b : env.beacons()) {
    out << "beacon " << b.id << ' ' << detail::fmt_full(b.position.x) << ' '
        << detail::fmt_full(b.position.y) << "\n";
  }
  out << "channel\n";
  for (int z = 0; z < env.n_zones(); ++z) {
    for (int b = 0; b < env.n_beacons(); ++b) {
      out << (env.channel_map().at(z, b) == ChannelCondition::nlos ? 'N' : 'L');
    }
    out << '\n';
  }
  if (!out) throw IoError("failed while writing environment snapshot");
}

inline void save_environment_file(const std::string& path, const GridEnvironment& env) {
  auto out = detail::open_out(path);
  save_environment(out, env);
}

inline GridEnvironment load_environment(std::istream& in) {
  std::string magic;
  int version = 0;
  in >> magic >> version;
  if (!in || magic != "juno-env" || version != 1) throw IoError("not a juno-env v1 snapshot");
  auto read_field = [&in](const char* name, auto& value) {
    std::string key;
    in >> key >> value;
    if (!in || key != name) throw IoError(std::string("environment snapshot missing ") + name);
  };
  int n_x = 0, n_y = 0, n_beacons = 0;
  double cell_size = 0.0;
  read_field("n_x", n_x);
  read_field("n_y", n_y);
  read_field("cell_size", cell_size);
  read_field("n_beacons", n_beacons);
  std::vector<Beacon> beacons;
  beacons.reserve(n_beacons);
  for (int i = 0; i < n_beacons; ++i) {
    std::string key;
    int id = 0;
    double x = 0.0, y = 0.0;
    in >> key >> id >> x >> y;
    if (!in || key != "beacon") throw IoError("environment snapshot: bad beacon line");
    beacons.push_back(Beacon{id, Vec2{x, y}});
  }
  std::string key;
  in >> key;
  if (!in || key != "channel") throw IoError("environment snapshot missing channel section");
  std::vector<ChannelCondition> table;
  table.reserve(static_cast<std::size_t>(n_x) * n_y * n_beacons);
  for (int z = 0; z < n_x * n_y; ++z) {
    std::string row;
    in >> row;
    if (!in || static_cast<int>(row.size()) != n_beacons) {
      throw IoError("environment snapshot: bad channel row");
    }
    for (char c : row) {
      if (c != 'L' && c != 'N') throw IoError("environment snapshot: bad channel flag");
      table.push_back(c == 'N' ? ChannelCondition::nlos : ChannelCondition::los);
    }
  }
  return GridEnvironment(n_x, n_y, cell_size, std::move(beacons),
                         ChannelMap(n_x * n_y, n_beacons, std::move(table)));
}

inline GridEnvironment load_environment_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open environment snapshot: " + path);
  return load_environment(in);
}

// --- run manifest ------------------------------------------------------------

/// Everything needed to re-run one command bit-identically.
inline nlohmann::json make_manifest(const std::string& command, const ExperimentConfig& config) {
  nlohmann::json j;
  j["format"] = "juno-manifest";
  j["version"] = 1;
  j["tool_version"] = version;
  j["command"] = command;
  j["config"] = config;
  return j;
}

inline void write_manifest(const std::string& path, const nlohmann::json& manifest) {
  auto out = detail::open_out(path);
  out << manifest.dump(2) << '\n';
  if (!out) throw IoError("failed while writing " + path);
}

/// Waypoint file: optional "x,y" header then one zone per line.
inline std::vector<Zone> load_waypoints_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open waypoint file: " + path);
  std::vector<Zone> waypoints;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (waypoints.empty() && (line.find_first_not_of("0123456789,-+ \t\r") != std::string::npos)) {
      continue;  // header
    }
    int x = 0, y = 0;
    if (std::sscanf(line.c_str(), "%d,%d", &x, &y) != 2) {
      throw IoError("bad waypoint line: " + line);
    }
    waypoints.push_back(Zone{x, y});
  }
  if (waypoints.empty()) throw ValidationError("waypoint file has no waypoints");
  return waypoints;
}

}  // namespace juno
