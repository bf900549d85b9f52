#pragma once

// Run configuration files: a small TOML subset read into a JSON tree.
//
//   # comment
//   [section.sub]
//   key = 1.5 | 42 | "text" | true | [1, 2, 3]
//
// Inline tables, multi-line arrays and dates are not supported.

#include <string>

#include "json.hpp"

namespace odmp {

/// Throws ConfigError with the offending line number on malformed input.
nlohmann::json parse_config(const std::string& text);

/// Throws IoError if the file cannot be read.
nlohmann::json load_config(const std::string& path);

/// FNV-1a 64-bit of the bytes, as 16 hex digits.
std::string fnv1a_hex(const std::string& bytes);

/// Hash of the canonical (sorted-key, compact) dump of a JSON value.
std::string config_hash(const nlohmann::json& cfg);

}  // namespace odmp
