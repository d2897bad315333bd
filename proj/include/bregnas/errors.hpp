#pragma once

#include <stdexcept>
#include <string>

namespace bregnas {

// Shape/extent disagreement between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Invalid scalar argument (negative sigma, even kernel size, r outside [0,1], ...).
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Malformed file contents (bad IDX magic, truncated payload, bad checkpoint header).
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Inputs violate a structural contract (constraint-violating parameters,
// stale trace, mismatched regularizer spec).
struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An optimizer step was aborted; persistent state is left untouched.
struct StepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad run configuration or CLI usage.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace bregnas
