#pragma once

#include <stdexcept>
#include <string>

namespace cnsfv {

/// Configuration rejected (unknown key, bad value, inconsistent selection).
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Iterative solver failed to reach its tolerance within the iteration cap.
struct SolverError : std::runtime_error {
  SolverError(const std::string& what, int iterations, double residual)
      : std::runtime_error(what), iterations(iterations), residual(residual) {}
  int iterations = 0;
  double residual = 0.0;
};

/// A runtime guarantee was violated (CFL, positivity, conservation, maximum
/// principle, compatibility). Carries the step index when known.
struct InvariantError : std::runtime_error {
  explicit InvariantError(const std::string& what, long long step = -1)
      : std::runtime_error(what), step(step) {}
  long long step = -1;
};

/// File could not be read or written, or its contents are malformed.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cnsfv
