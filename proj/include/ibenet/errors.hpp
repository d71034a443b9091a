#pragma once

#include <stdexcept>
#include <string>

namespace ibenet {

/// Mis-wired blackboard: a write, read or route that crosses node boundaries
/// or names a level that does not exist.
class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A value handed to an operation violates its documented range.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scenario file could not be read or validated. The message starts with the
/// offending field path, e.g. "network.alpha: must lie in [0,1]".
class LoadError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class QueryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ibenet
