#pragma once

#include <stdexcept>
#include <string>

namespace nbv {

// Invalid argument values (out-of-range probabilities, non-positive
// exponents, bad resolutions, ...).
struct DomainError : std::invalid_argument {
  explicit DomainError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Malformed on-disk data; the message names the byte offset when known.
struct FormatError : std::runtime_error {
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally invalid scene or experiment description.
struct SpecError : std::runtime_error {
  explicit SpecError(const std::string& msg) : std::runtime_error(msg) {}
};

// Camera pose outside the admissible search space.
struct PoseError : std::runtime_error {
  explicit PoseError(const std::string& msg) : std::runtime_error(msg) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace nbv
