#include <iostream>

#include "CLI11.hpp"
#include "commands.hpp"
#include "odmp/errors.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kIo = 3, kNumerical = 4 };

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Online decisions with global goals: instance generation, runs and analysis"};
    app.require_subcommand(1);
    odmp::cli::Options opt;

    auto* gen = app.add_subcommand("generate", "write seeded instance files");
    auto* run = app.add_subcommand("run", "run the online algorithm over seeds and step sizes");
    auto* ana = app.add_subcommand("analyze", "aggregate traces and compute unevenness tables");
    for (auto* sub : {gen, run, ana}) {
        sub->add_option("--out", opt.out, "output directory (default: config, then $ODMP_OUT_DIR)");
        sub->add_option("--workers", opt.workers, "worker threads")->check(CLI::NonNegativeNumber);
    }
    gen->add_option("--config", opt.config_path, "generator config")->required();
    gen->add_option("--seeds", opt.seeds, "instance seeds")->delimiter(',');
    run->add_option("--config", opt.config_path, "run config")->required();
    run->add_option("--seeds", opt.seeds, "arrival-order (or instance) seeds")->delimiter(',');
    run->add_option("--gamma-list", opt.gammas, "step-size multipliers")->delimiter(',');
    ana->add_option("--config", opt.config_path, "analysis config");
    ana->add_option("--trace-dir", opt.trace_dir, "directory holding trace CSVs (default: output directory)");

    bool empty_seeds = false;
    for (auto* sub : {gen, run})
        sub->get_option("--seeds")->each([&](const std::string& s) { empty_seeds = empty_seeds || s.empty(); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kConfig;
    }

    try {
        if (empty_seeds) throw odmp::ConfigError("seed list is empty");
        if (gen->parsed()) return odmp::cli::cmd_generate(opt);
        if (run->parsed()) return odmp::cli::cmd_run(opt);
        return odmp::cli::cmd_analyze(opt);
    } catch (const odmp::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kConfig;
    } catch (const odmp::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const odmp::NumericalGuardError& e) {
        std::cerr << "numerical guard: " << e.what() << "\n";
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
