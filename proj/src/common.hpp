#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace sphstat {

enum class Errc {
  invalid_argument,
  unsupported,
  numeric_failure,
  io_failure,
  insufficient_margin,
  validation_failed,
};

struct Error : std::runtime_error {
  Errc code;
  Error(Errc c, const std::string& what) : std::runtime_error(what), code(c) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kPi = 3.14159265358979323846264338327950288;
inline constexpr double kTau = 2.0 * kPi;

inline constexpr const char* kVersion = "0.1.0";

}  // namespace sphstat
