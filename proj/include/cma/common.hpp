#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace cma {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Grid mismatch, monomial degree overflow, unsupported operand shapes.
struct ShapeError : Error {
  using Error::Error;
};

/// min |a| fell below the configured floor; divisions by a are unsafe.
struct DegenerateState : Error {
  using Error::Error;
};

struct CollarViolation : Error {
  using Error::Error;
};

struct GrowthBudgetExceeded : Error {
  using Error::Error;
};

struct NonVariationalSymmetry : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace cma
