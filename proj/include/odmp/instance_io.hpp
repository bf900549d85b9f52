#pragma once

// Instance files. The text form is JSON lines: one header record followed by
// one record per step. The packed form is
//
//   "ODMPBIN1" | u64 header length | header JSON | per-step blocks
//
// with little-endian integers and IEEE doubles. Both forms round-trip exactly.

#include <string>

#include "json.hpp"
#include "odmp/instances.hpp"

namespace odmp {

inline constexpr int kInstanceFormatVersion = 1;

nlohmann::json goal_to_json(const GoalSpec& goal);
GoalSpec goal_from_json(const nlohmann::json& j);

nlohmann::json constants_to_json(const InstanceConstants& c);
InstanceConstants constants_from_json(const nlohmann::json& j);

nlohmann::json step_to_json(const LocalStep& step);
LocalStep step_from_json(const nlohmann::json& j);

nlohmann::json partition_to_json(const Partition& p);
Partition partition_from_json(const nlohmann::json& j);

std::string instance_to_text(const Instance& inst);
Instance instance_from_text(const std::string& text);

std::string instance_to_binary(const Instance& inst);
Instance instance_from_binary(const std::string& bytes);

/// Hash of the canonical text form.
std::string instance_hash(const Instance& inst);

/// Writes via a temporary file and rename, so readers never see a partial file.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

/// `binary` selects the packed form.
void save_instance(const Instance& inst, const std::string& path, bool binary = false);
/// Detects the form from the leading bytes.
Instance load_instance(const std::string& path);

}  // namespace odmp
