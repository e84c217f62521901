#pragma once

#include <stdexcept>
#include <string>

namespace sdd {

// File and format problems: missing files, bad headers, truncated payloads.
// The CLI maps these to exit code 2.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Contract violations between in-process values: dimension mismatches,
// invalid parameters. Mapped to exit code 2 as well.
struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent run configuration. Mapped to exit code 1.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Numerical failure at run time (divergence, non-finite loss). Exit code 3.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sdd
