#pragma once

#include <stdexcept>
#include <string>

namespace gglink {

// Malformed input data (bad CSV field, bad JSON, bad checkpoint).
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

// Structurally valid input that violates a contract (id out of range,
// shape mismatch, fraction out of range, ...).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem-level failures.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace gglink
