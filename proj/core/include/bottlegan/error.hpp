#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace bottlegan {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed arguments: bad shapes, non-finite values, out-of-range knobs.
struct InvalidInputError : Error {
  using Error::Error;
};

// Too few pixels above the optical-density threshold for stain estimation.
struct InsufficientTissueError : Error {
  using Error::Error;
};

// The optical-density cloud does not span a two-dye plane.
struct DegenerateInputError : Error {
  using Error::Error;
};

// Unknown style id in a style bank lookup.
struct LookupError : Error {
  using Error::Error;
};

// Bad magic, version mismatch, or truncated checkpoint container.
struct CheckpointError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

// Client/server message violates the federation contract.
struct ProtocolError : Error {
  using Error::Error;
};

struct TrainingDivergedError : Error {
  std::int64_t step;
  TrainingDivergedError(const std::string& what, std::int64_t step_index)
      : Error(what), step(step_index) {}
};

}  // namespace bottlegan
