#pragma once

#include <stdexcept>
#include <string>

namespace porocomb {

// Exception hierarchy. The CLI maps each family onto a stable exit code.

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Violated precondition on a public entry point.
struct InvalidArgument : Error {
  using Error::Error;
};

// Hypothesis audit failed on an instance that must be admissible.
struct AuditFailure : Error {
  using Error::Error;
};

// Picard iteration exceeded its budget or showed sustained gap growth.
struct DivergenceError : Error {
  using Error::Error;
};

// Solution norm crossed the configured ceiling at time `time`.
struct BlowUpError : Error {
  BlowUpError(const std::string& what, double t) : Error(what), time(t) {}
  double time;
};

// Iterate left the ball of radius R in theoretical window mode.
struct BallViolation : Error {
  using Error::Error;
};

// Config text could not be parsed or failed semantic validation.
struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace porocomb
