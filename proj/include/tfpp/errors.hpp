#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace tfpp {

namespace detail {

// scientific-notation formatting for error messages (std::to_string prints
// six fixed decimals, which renders small bounds as "0.000000")
inline std::string fmt_sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

}  // namespace detail

/// Requested tolerance could not be certified; `achieved` carries the error
/// bound that was certified instead of silently returning a degraded value.
class AccuracyError : public std::runtime_error {
public:
  AccuracyError(const std::string& what, double achieved_err)
      : std::runtime_error(what), achieved(achieved_err) {}
  double achieved;
};

/// An iterative procedure ran out of its iteration budget.
class NonconvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Pointwise overflow inside a nonlinearity evaluation. Solvers translate
/// this into the blow-up path rather than treating it as a hard failure.
class OverflowSignal : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A reference computation declined to produce a value (out of its certified
/// range) instead of degrading.
class RefusalError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace tfpp
