#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace juno {

inline constexpr const char* version = "1.0.0";

/// Propagation speed used to convert distances to arrival times (m/s).
inline constexpr double speed_of_light = 3.0e8;

/// Invalid configuration or arguments. CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File or stream failure. CLI maps this to exit code 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Non-finite value reached a place that requires finite numbers.
/// CLI maps this to exit code 3.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Continuous planar position in meters.
struct Vec2 {
  double x{};
  double y{};
};

inline double distance(Vec2 a, Vec2 b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return std::sqrt(dx * dx + dy * dy);
}

/// Integer zone coordinates. Valid zones satisfy 0 <= x < n_x, 0 <= y < n_y
/// (half-open, so the venue holds exactly n_x * n_y zones).
struct Zone {
  int x{};
  int y{};

  bool operator==(const Zone&) const = default;
};

}  // namespace juno
