#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "juno/agent.hpp"
#include "juno/common.hpp"

namespace juno {

/// Empirical CDF of a set of location errors. Duplicate errors collapse into
/// one support point, so probabilities are strictly increasing up to 1.
struct EcdfCurve {
  std::vector<double> errors;  // non-decreasing support points (meters)
  std::vector<double> probs;   // cumulative probability at each support point

  /// P(error <= x); 0 below the support, 1 from the last point on.
  double evaluate(double x) const {
    const auto it = std::upper_bound(errors.begin(), errors.end(), x);
    if (it == errors.begin()) return 0.0;
    return probs[static_cast<std::size_t>(it - errors.begin()) - 1];
  }
};

inline EcdfCurve ecdf(std::vector<double> errors) {
  if (errors.empty()) throw ValidationError("ecdf needs at least one value");
  std::sort(errors.begin(), errors.end());
  EcdfCurve curve;
  const double n = static_cast<double>(errors.size());
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (i + 1 < errors.size() && errors[i + 1] == errors[i]) continue;
    curve.errors.push_back(errors[i]);
    curve.probs.push_back(static_cast<double>(i + 1) / n);
  }
  return curve;
}

/// First-order stochastic dominance: a's probability is >= b's at every
/// error value. Step functions only change on their supports, so checking
/// the union of support points suffices.
inline bool ecdf_dominates(const EcdfCurve& a, const EcdfCurve& b) {
  for (double e : a.errors) {
    if (a.evaluate(e) < b.evaluate(e)) return false;
  }
  for (double e : b.errors) {
    if (a.evaluate(e) < b.evaluate(e)) return false;
  }
  return true;
}

/// Half-open epoch range [begin, end).
struct EpochWindow {
  int begin{};
  int end{};

  bool contains(int epoch) const { return epoch >= begin && epoch < end; }
};

/// The final fraction of training treated as converged (default the last
/// 10% of epochs, at least one).
inline EpochWindow steady_state_window(int n_epoch, double fraction = 0.1) {
  if (n_epoch < 1) throw ValidationError("n_epoch must be at least 1");
  const int len = std::max(1, static_cast<int>(std::lround(n_epoch * fraction)));
  return EpochWindow{n_epoch - len, n_epoch};
}

/// Root mean squared location error over the steps inside the window.
inline double rmse(const EpisodeLog& log, EpochWindow window) {
  double sum_sq = 0.0;
  std::size_t count = 0;
  for (const StepRecord& rec : log) {
    if (!window.contains(rec.epoch)) continue;
    sum_sq += rec.error_m * rec.error_m;
    ++count;
  }
  if (count == 0) throw ValidationError("rmse window contains no steps");
  return std::sqrt(sum_sq / static_cast<double>(count));
}

inline double mean_error(const EpisodeLog& log, EpochWindow window) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const StepRecord& rec : log) {
    if (!window.contains(rec.epoch)) continue;
    sum += rec.error_m;
    ++count;
  }
  if (count == 0) throw ValidationError("mean_error window contains no steps");
  return sum / static_cast<double>(count);
}

inline int log_epoch_count(const EpisodeLog& log) {
  int n = 0;
  for (const StepRecord& rec : log) n = std::max(n, rec.epoch + 1);
  return n;
}

/// Sum of rewards per epoch, ordered by epoch.
inline std::vector<double> cumulative_reward(const EpisodeLog& log) {
  if (log.empty()) throw ValidationError("cumulative_reward needs a non-empty log");
  std::vector<double> out(log_epoch_count(log), 0.0);
  for (const StepRecord& rec : log) out[rec.epoch] += rec.reward;
  return out;
}

/// Mean location error per epoch, ordered by epoch.
inline std::vector<double> mean_error_per_epoch(const EpisodeLog& log) {
  if (log.empty()) throw ValidationError("mean_error_per_epoch needs a non-empty log");
  const int n = log_epoch_count(log);
  std::vector<double> sums(n, 0.0);
  std::vector<int> counts(n, 0);
  for (const StepRecord& rec : log) {
    sums[rec.epoch] += rec.error_m;
    ++counts[rec.epoch];
  }
  for (int e = 0; e < n; ++e) sums[e] = counts[e] > 0 ? sums[e] / counts[e] : 0.0;
  return sums;
}

/// First epoch whose mean error is at or below the threshold; the epoch
/// count itself when the run never gets there.
inline int epochs_to_reach(const std::vector<double>& per_epoch_mean, double threshold) {
  for (std::size_t e = 0; e < per_epoch_mean.size(); ++e) {
    if (per_epoch_mean[e] <= threshold) return static_cast<int>(e);
  }
  return static_cast<int>(per_epoch_mean.size());
}

/// Headline numbers for one run.
struct RunSummary {
  double rmse_m{};
  double mean_error_m{};
  std::vector<double> cumulative_reward_per_epoch;
  EpochWindow steady_window{};
};

inline RunSummary summarize(const EpisodeLog& log, EpochWindow steady) {
  RunSummary s;
  s.steady_window = steady;
  s.rmse_m = rmse(log, steady);
  s.mean_error_m = mean_error(log, steady);
  s.cumulative_reward_per_epoch = cumulative_reward(log);
  return s;
}

}  // namespace juno
