#pragma once

#include <stdexcept>
#include <string>

namespace fuguescope {

// Bad inputs: invalid configuration, unreadable or malformed files, schema
// violations. Maps to exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Failures while running: devices, I/O mid-stream, network binding.
// Maps to exit code 3 in the CLI.
class RuntimeError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fuguescope
