#pragma once

// Trajectory CSV files and run checkpoints.

#include <string>

#include "json.hpp"
#include "odmp/analysis.hpp"
#include "odmp/dual_learner.hpp"

namespace odmp {

/// Exact header of trajectory files.
inline constexpr const char* kTraceCsvHeader = "t,reward_avg,goalvio_avg,p_norm,eta";

std::string metrics_to_csv(const MetricSeries& s);
/// Throws IoError on a wrong header or a malformed row.
MetricSeries metrics_from_csv(const std::string& text);

/// Mean/min/max columns for each series.
std::string aggregate_to_csv(const AggregateSeries& a);

nlohmann::json record_to_json(const StepRecord& r);
StepRecord record_from_json(const nlohmann::json& j);

/// State plus the records committed so far, enough to resume a run.
nlohmann::json checkpoint_to_json(const DualState& state, const RunTrace& trace, const std::string& config_hash);

struct Checkpoint {
    DualState state;
    std::vector<StepRecord> records;
    std::size_t box_violations = 0;
    std::string config_hash;
};

Checkpoint checkpoint_from_json(const nlohmann::json& j);

}  // namespace odmp
