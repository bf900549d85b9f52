#pragma once

#include <stdexcept>
#include <string>

namespace odmp {

/// Invalid parameters, malformed config, or a request the build cannot serve.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// File system or (de)serialization failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

/// An internal invariant was broken at runtime (dual price left the polar
/// cone, non-finite values, ...). Indicates a bug, not bad input.
class NumericalGuardError : public std::runtime_error {
public:
    explicit NumericalGuardError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace odmp
