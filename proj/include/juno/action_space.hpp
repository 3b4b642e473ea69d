#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "juno/common.hpp"

namespace juno {

/// All beacon subsets of size n_r, each tuple sorted ascending and the list
/// ordered lexicographically, so an action index is stable across runs.
class ActionSpace {
 public:
  ActionSpace(int n_beacons, int n_r) : n_beacons_(n_beacons), n_r_(n_r) {
    if (n_r_ < 1) throw ValidationError("n_r must be at least 1");
    if (n_r_ > n_beacons_) {
      throw ValidationError("n_r = " + std::to_string(n_r_) + " exceeds beacon count " +
                            std::to_string(n_beacons_));
    }
    const std::uint64_t count = cardinality(n_beacons_, n_r_);
    if (count > 1'000'000ull) {
      throw ValidationError("action space too large: C(" + std::to_string(n_beacons_) + ", " +
                            std::to_string(n_r_) + ") = " + std::to_string(count));
    }
    flat_.reserve(count * n_r_);
    std::vector<int> tuple(n_r_);
    for (int i = 0; i < n_r_; ++i) tuple[i] = i;
    while (true) {
      flat_.insert(flat_.end(), tuple.begin(), tuple.end());
      // advance to the next combination in lexicographic order
      int i = n_r_ - 1;
      while (i >= 0 && tuple[i] == n_beacons_ - n_r_ + i) --i;
      if (i < 0) break;
      ++tuple[i];
      for (int j = i + 1; j < n_r_; ++j) tuple[j] = tuple[j - 1] + 1;
    }
  }

  int n_beacons() const { return n_beacons_; }
  int n_r() const { return n_r_; }
  int n_actions() const { return static_cast<int>(flat_.size() / n_r_); }

  std::span<const int> subset(int action_index) const {
    if (action_index < 0 || action_index >= n_actions()) {
      throw ValidationError("action index out of range");
    }
    return {flat_.data() + static_cast<std::size_t>(action_index) * n_r_,
            static_cast<std::size_t>(n_r_)};
  }

  /// Index of an ascending beacon tuple; -1 when it is not a valid subset.
  int index_of(std::span<const int> tuple) const {
    if (static_cast<int>(tuple.size()) != n_r_) return -1;
    for (int a = 0; a < n_actions(); ++a) {
      const auto s = subset(a);
      if (std::equal(s.begin(), s.end(), tuple.begin())) return a;
    }
    return -1;
  }

  /// Closed-form count N! / ((N - r)! r!), evaluated so every intermediate
  /// product is itself a binomial coefficient and stays exact.
  static std::uint64_t cardinality(int n, int r) {
    if (r < 0 || r > n) return 0;
    r = std::min(r, n - r);
    std::uint64_t result = 1;
    for (int i = 1; i <= r; ++i) {
      result = result * static_cast<std::uint64_t>(n - r + i) / static_cast<std::uint64_t>(i);
    }
    return result;
  }

 private:
  int n_beacons_;
  int n_r_;
  std::vector<int> flat_;
};

}  // namespace juno
