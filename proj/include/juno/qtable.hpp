#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "juno/common.hpp"
#include "juno/rng.hpp"

namespace juno {

/// Environment fingerprint stored with a table so a serialized policy can
/// only be replayed against a compatible world.
struct QTableMeta {
  int n_x{};
  int n_y{};
  int n_beacons{};
  int n_r{};
  std::uint64_t seed{};

  bool compatible_with(const QTableMeta& other) const {
    return n_x == other.n_x && n_y == other.n_y && n_beacons == other.n_beacons &&
           n_r == other.n_r;
  }
};

/// Dense n_states x n_actions action-value table. All entries stay finite;
/// update paths check this before writing.
class QTable {
 public:
  QTable(int n_states, int n_actions, QTableMeta meta)
      : n_states_(n_states), n_actions_(n_actions), meta_(meta) {
    if (n_states_ < 1 || n_actions_ < 1) {
      throw ValidationError("qtable needs at least one state and one action");
    }
    values_.assign(static_cast<std::size_t>(n_states_) * n_actions_, 0.0);
  }

  int n_states() const { return n_states_; }
  int n_actions() const { return n_actions_; }
  const QTableMeta& meta() const { return meta_; }
  QTableMeta& meta() { return meta_; }

  double at(int state, int action) const { return values_[index(state, action)]; }

  void set(int state, int action, double value) {
    if (!std::isfinite(value)) throw NumericError("q-value must be finite");
    values_[index(state, action)] = value;
  }

  /// Greedy action for a state; equal values resolve to the lowest index.
  int greedy_action(int state) const {
    const std::size_t base = static_cast<std::size_t>(state) * n_actions_;
    int best = 0;
    for (int a = 1; a < n_actions_; ++a) {
      if (values_[base + a] > values_[base + best]) best = a;
    }
    return best;
  }

  double max_value(int state) const { return at(state, greedy_action(state)); }

  /// Fills every entry with i.i.d. uniform [0, 1) draws (random guide tables).
  void fill_uniform(Rng& rng) {
    for (double& v : values_) v = rng.uniform01();
  }

  const std::vector<double>& values() const { return values_; }

  // --- serialization -------------------------------------------------------
  // Versioned text format: a metadata header followed by one row-major line
  // of values per state, printed with 17 significant digits so the
  // round-trip is lossless.

  void save(std::ostream& out) const {
    out << "juno-qtable 1\n";
    out << "n_x " << meta_.n_x << "\n";
    out << "n_y " << meta_.n_y << "\n";
    out << "n_beacons " << meta_.n_beacons << "\n";
    out << "n_r " << meta_.n_r << "\n";
    out << "seed " << meta_.seed << "\n";
    out << "n_states " << n_states_ << "\n";
    out << "n_actions " << n_actions_ << "\n";
    char buf[40];
    for (int s = 0; s < n_states_; ++s) {
      for (int a = 0; a < n_actions_; ++a) {
        std::snprintf(buf, sizeof buf, "%.17g", at(s, a));
        out << buf << (a + 1 == n_actions_ ? '\n' : ' ');
      }
    }
    if (!out) throw IoError("failed while writing q-table");
  }

  void save_file(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open q-table file for writing: " + path);
    save(out);
  }

  static QTable load(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (!in || magic != "juno-qtable" || version != 1) {
      throw IoError("not a juno-qtable v1 file");
    }
    QTableMeta meta;
    int n_states = 0;
    int n_actions = 0;
    auto read_field = [&in](const char* name, auto& value) {
      std::string key;
      in >> key >> value;
      if (!in || key != name) throw IoError(std::string("q-table header missing field ") + name);
    };
    read_field("n_x", meta.n_x);
    read_field("n_y", meta.n_y);
    read_field("n_beacons", meta.n_beacons);
    read_field("n_r", meta.n_r);
    read_field("seed", meta.seed);
    read_field("n_states", n_states);
    read_field("n_actions", n_actions);
    QTable table(n_states, n_actions, meta);
    std::string token;
    for (int s = 0; s < n_states; ++s) {
      for (int a = 0; a < n_actions; ++a) {
        in >> token;
        if (!in) throw IoError("q-table data truncated");
        char* end = nullptr;
        const double v = std::strtod(token.c_str(), &end);
        if (end == token.c_str() || *end != '\0' || !std::isfinite(v)) {
          throw IoError("invalid q-table value: " + token);
        }
        table.values_[table.index(s, a)] = v;
      }
    }
    return table;
  }

  static QTable load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open q-table file: " + path);
    return load(in);
  }

 private:
  std::size_t index(int state, int action) const {
    if (state < 0 || state >= n_states_ || action < 0 || action >= n_actions_) {
      throw ValidationError("q-table index out of range");
    }
    return static_cast<std::size_t>(state) * n_actions_ + action;
  }

  int n_states_;
  int n_actions_;
  QTableMeta meta_;
  std::vector<double> values_;
};

}  // namespace juno
