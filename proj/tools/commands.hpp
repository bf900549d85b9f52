#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace odmp::cli {

struct Options {
    std::string config_path;
    std::vector<std::uint64_t> seeds;
    std::vector<double> gammas;
    int workers = 0;
    std::string out;
    std::string trace_dir;
};

/// Output directory: --out, then the config, then $ODMP_OUT_DIR, then ".".
std::string resolve_out_dir(const Options& opt, const nlohmann::json& cfg);

int cmd_generate(const Options& opt);
int cmd_run(const Options& opt);
int cmd_analyze(const Options& opt);

}  // namespace odmp::cli
