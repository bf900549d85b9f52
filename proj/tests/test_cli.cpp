#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "odmp/instance_io.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kRoot = fs::temp_directory_path() / "odmp_test_cli";

int odmp_exit(const std::string& args) {
    const std::string cmd = std::string(ODMP_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const std::string& body) {
    fs::create_directories(kRoot);
    const fs::path p = kRoot / name;
    std::ofstream(p) << body;
    return p;
}

std::string slurp(const fs::path& p) { return odmp::read_file(p.string()); }

const char* kRunConfig =
    "[instance]\nfamily = \"okpfot\"\nn = 8\nm = 3\nT = 120\nseed = 2\n"
    "[schedule]\ngamma_list = [0.5, 2]\n"
    "[input]\nmodel = \"uniform\"\nseeds = [1, 2]\n";

}  // namespace

TEST_CASE("generate writes stable instance files") {
    const fs::path cfg = write_config("gen.toml", "[instance]\nfamily = \"assignment\"\nT = 50\n");
    const fs::path a = kRoot / "gen_a", b = kRoot / "gen_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(odmp_exit("generate --config " + cfg.string() + " --seeds 3,4 --out " + a.string()) == 0);
    REQUIRE(odmp_exit("generate --config " + cfg.string() + " --seeds 3 --out " + b.string()) == 0);
    CHECK(fs::exists(a / "assignment_seed4.jsonl"));
    CHECK(slurp(a / "assignment_seed3.jsonl") == slurp(b / "assignment_seed3.jsonl"));
    CHECK(odmp::load_instance((a / "assignment_seed3.jsonl").string()).horizon() == 50);
}

TEST_CASE("bad input maps to the documented exit codes") {
    const fs::path bad = write_config("bad.toml", "[instance]\nfamily = \"okpfot\"\nrho = -1.0\nT = 10\n");
    CHECK(odmp_exit("generate --config " + bad.string() + " --seeds 1 --out " + (kRoot / "bad").string()) == 2);
    const fs::path good = write_config("good.toml", kRunConfig);
    CHECK(odmp_exit("run --config " + good.string() + " --seeds \"\" --out " + (kRoot / "x").string()) == 2);
    CHECK(odmp_exit("run --config " + good.string() + " --gamma-list 0 --out " + (kRoot / "x").string()) == 2);
    CHECK(odmp_exit("run --config " + (kRoot / "absent.toml").string()) == 3);
    CHECK(odmp_exit("analyze --trace-dir " + (kRoot / "no_such_dir").string()) == 3);
    CHECK(odmp_exit("frobnicate") == 2);
}

TEST_CASE("reruns are bit-identical and analyze aggregates them") {
    const fs::path cfg = write_config("run.toml", kRunConfig);
    const fs::path a = kRoot / "run_a", b = kRoot / "run_b";
    fs::remove_all(a);
    fs::remove_all(b);
    REQUIRE(odmp_exit("run --config " + cfg.string() + " --workers 2 --out " + a.string()) == 0);
    REQUIRE(odmp_exit("run --config " + cfg.string() + " --workers 1 --out " + b.string()) == 0);
    for (const char* f : {"trace_s1_g0.5.csv", "trace_s2_g2.csv", "summary_s2_g0.5.json", "run_manifest.json"})
        CHECK(slurp(a / f) == slurp(b / f));
    CHECK_FALSE(fs::exists(a / "checkpoint_s1_g0.5.json"));

    REQUIRE(odmp_exit("analyze --out " + a.string()) == 0);
    CHECK(fs::exists(a / "aggregate_g0.5.csv"));
    CHECK(fs::exists(a / "analysis_report.json"));
}

TEST_CASE("analyze accepts a single trace") {
    const fs::path cfg = write_config("one.toml", kRunConfig);
    const fs::path d = kRoot / "one";
    fs::remove_all(d);
    REQUIRE(odmp_exit("run --config " + cfg.string() + " --seeds 5 --gamma-list 1 --out " + d.string()) == 0);
    REQUIRE(odmp_exit("analyze --out " + d.string()) == 0);
    std::stringstream report(slurp(d / "analysis_report.json"));
    CHECK(report.str().find("\"runs\": 1") != std::string::npos);
}

TEST_CASE("analyze builds unevenness tables without traces") {
    const fs::path cfg = write_config("unev.toml", "[unevenness]\nm = 4\nT = [64, 256]\nK = 4\n");
    const fs::path d = kRoot / "unev";
    fs::remove_all(d);
    REQUIRE(odmp_exit("analyze --config " + cfg.string() + " --out " + d.string()) == 0);
    const std::string csv = slurp(d / "unevenness.csv");
    CHECK(csv.rfind("partition,T,W\n", 0) == 0);
    CHECK(csv.find("k_periodic,256,") != std::string::npos);
}
