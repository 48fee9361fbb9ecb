#pragma once

#include <stdexcept>
#include <string>

namespace streamlink {

// Each error family maps onto one CLI exit code (see app/commands.hpp).

/// Bad or inconsistent configuration (exit code 2).
class ConfigError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed data or broken structural precondition (exit code 3).
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Raw record input that cannot be ingested (exit code 3).
class IngestionError : public StructuralError {
public:
  using StructuralError::StructuralError;
};

/// A sample store that does not extend the declared prior stage (exit code 4).
class LineageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace streamlink
