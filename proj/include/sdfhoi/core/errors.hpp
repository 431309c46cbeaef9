#pragma once

#include <stdexcept>
#include <string>

namespace sdfhoi {

// Invalid domain values (out-of-range parameters, malformed inputs).
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Geometry that violates a module contract (e.g. non-watertight mesh).
struct ContractError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Scene generation gave up (rejection sampling exhausted).
struct GenerationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point sampling cannot satisfy its contract (degenerate scene).
struct SamplingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// File I/O errors, each failure mode distinct.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VersionMismatchError : IoError {
  using IoError::IoError;
};
struct TruncatedFileError : IoError {
  using IoError::IoError;
};
struct ChecksumError : IoError {
  using IoError::IoError;
};
struct ConfigHashMismatchError : IoError {
  using IoError::IoError;
};

// Training diverged or produced a non-finite loss term.
struct TrainingError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sdfhoi
