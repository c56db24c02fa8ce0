#pragma once

#include <stdexcept>
#include <string>

namespace depthtrack {

/// Malformed, truncated, or out-of-range input file. The message names the
/// file plus the line number or byte offset where parsing stopped.
class FormatError : public std::runtime_error {
public:
  explicit FormatError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Unknown key, type mismatch, or out-of-range value in a configuration file.
/// The message names the offending key.
class ConfigError : public std::runtime_error {
public:
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Inputs carry no texture to align against (near-zero image variance).
class DegenerateInputError : public std::runtime_error {
public:
  explicit DegenerateInputError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Pose alignment finished with too little valid overlap to trust the result.
class UnreliablePoseError : public std::runtime_error {
public:
  explicit UnreliablePoseError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace depthtrack
