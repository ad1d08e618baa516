#pragma once

#include <stdexcept>
#include <string>

namespace swarm {

// Invalid or unparseable configuration. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A caller broke a documented precondition (length mismatch, bad shape, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Unknown agent id or similar lookup failure.
class LookupError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// Non-finite loss or parameters during training.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed, truncated or unsupported file (checkpoints, configs on disk).
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Observation width of a checkpoint does not match the requested model.
class DimensionError : public FormatError {
 public:
  using FormatError::FormatError;
};

}  // namespace swarm
