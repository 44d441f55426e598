#pragma once

#include <stdexcept>
#include <string>

namespace vdcs {

// Bad arguments, malformed configs, contract violations. CLI exit code 1.
struct ValidationError : std::runtime_error {
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem and codec failures. CLI exit code 2.
struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace vdcs
