#include <filesystem>

#include "doctest.h"
#include "odmp/config.hpp"
#include "odmp/errors.hpp"
#include "odmp/instance_io.hpp"
#include "odmp/trace_io.hpp"

using namespace odmp;
namespace fs = std::filesystem;

namespace {

std::vector<Instance> sample_instances() {
    OkpFotConfig k;
    k.n = 6;
    k.m = 3;
    k.T = 12;
    AovcConfig a;
    a.T = 20;
    AssignmentConfig g;
    g.T = 15;
    return {gen_okpfot(k), gen_aovc_synthetic(a), gen_assignment(g), gen_example2(8, Example2Scenario::B)};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "odmp_test_io";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("instances round-trip through both file forms") {
    for (const Instance& inst : sample_instances()) {
        const std::string text = instance_to_text(inst);
        const Instance t = instance_from_text(text);
        CHECK(instance_to_text(t) == text);
        CHECK(t.family == inst.family);
        CHECK(t.constants.d_y == inst.constants.d_y);

        const Instance b = instance_from_binary(instance_to_binary(inst));
        CHECK(instance_hash(b) == instance_hash(inst));

        const fs::path pt = scratch(inst.family + ".jsonl"), pb = scratch(inst.family + ".bin");
        save_instance(inst, pt.string());
        save_instance(inst, pb.string(), true);
        CHECK(instance_hash(load_instance(pt.string())) == instance_hash(inst));
        CHECK(instance_hash(load_instance(pb.string())) == instance_hash(inst));
    }
}

TEST_CASE("goals round-trip") {
    const GoalSpec inner = GoalSpec::max_min_gap(2, 3.0, false);
    for (const GoalSpec& g :
         {GoalSpec::box({0.0, 0.1}, {1.0, 2.0}), inner, GoalSpec::boxed(inner, {-1.0, -1.0}, {4.0, 4.0})}) {
        CHECK(goal_to_json(goal_from_json(goal_to_json(g))) == goal_to_json(g));
    }
    CHECK_THROWS_AS(goal_from_json(nlohmann::json{{"kind", "ellipse"}}), ConfigError);
}

TEST_CASE("damaged instance files are rejected") {
    const Instance inst = sample_instances()[0];
    const std::string text = instance_to_text(inst);
    CHECK_THROWS(instance_from_text(text.substr(0, text.size() / 2)));
    CHECK_THROWS(instance_from_text("{\"format\":\"other\"}\n"));
    CHECK_THROWS(instance_from_text(""));
    const std::string bin = instance_to_binary(inst);
    CHECK_THROWS_AS(instance_from_binary(bin.substr(0, bin.size() - 5)), IoError);
    std::string bad = bin;
    bad[0] = 'X';
    CHECK_THROWS_AS(instance_from_binary(bad), IoError);
    CHECK_THROWS_AS(load_instance(scratch("missing.jsonl").string()), IoError);
}

TEST_CASE("config parser") {
    const auto j = parse_config(
        "# run\n"
        "[instance]\nfamily = \"okpfot\"\nn = 20\nrho = 100.0\n"
        "[schedule]\ngamma_list = [0.1, 1, 10]\n"
        "[output.files]\nbinary = true  # packed\n");
    CHECK(j["instance"]["family"] == "okpfot");
    CHECK(j["instance"]["n"].get<int>() == 20);
    CHECK(j["instance"]["rho"].get<double>() == 100.0);
    CHECK(j["schedule"]["gamma_list"].size() == 3);
    CHECK(j["output"]["files"]["binary"] == true);
    CHECK(config_hash(j) == config_hash(parse_config(
                                "[output.files]\nbinary = true\n[schedule]\ngamma_list = [0.1, 1, 10]\n"
                                "[instance]\nrho = 100.0\nn = 20\nfamily = \"okpfot\"\n")));
    CHECK_THROWS_AS(parse_config("[instance\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("key\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("a = [1, 2\n"), ConfigError);
    CHECK_THROWS_AS(load_config(scratch("missing.toml").string()), IoError);
    CHECK(fnv1a_hex("") == "cbf29ce484222325");
}

TEST_CASE("trajectory CSV round-trips exactly") {
    MetricSeries s{{1, 2, 3}, {0.1, 1.0 / 3.0, 2.5e-17}, {0.0, 1e300, 7.0}, {0.0, 0.5, 0.25}, {1.0, 0.7, 0.577}};
    const std::string csv = metrics_to_csv(s);
    CHECK(csv.rfind(kTraceCsvHeader, 0) == 0);
    const MetricSeries r = metrics_from_csv(csv);
    CHECK(r.t == s.t);
    CHECK(r.reward_avg == s.reward_avg);
    CHECK(r.goalvio_avg == s.goalvio_avg);
    CHECK(r.eta == s.eta);
    CHECK_THROWS_AS(metrics_from_csv("t,x\n1,2\n"), IoError);
    CHECK_THROWS_AS(metrics_from_csv(std::string(kTraceCsvHeader) + "\n1,abc,0,0,0\n"), IoError);
}

TEST_CASE("checkpoint round-trips") {
    const Instance inst = sample_instances()[0];
    std::optional<DualState> state;
    std::optional<RunTrace> part;
    RunOptions opts;
    opts.checkpoint_every = 5;
    opts.on_checkpoint = [&](const DualState& s, const RunTrace& tr) {
        if (!state) {
            state = s;
            part = tr;
        }
    };
    (void)run_online(inst.steps, {}, inst.goal, inst.constants, {}, opts);
    REQUIRE(state);
    const Checkpoint c = checkpoint_from_json(nlohmann::json::parse(checkpoint_to_json(*state, *part, "abc").dump()));
    CHECK(c.config_hash == "abc");
    CHECK(c.state.p == state->p);
    CHECK(c.state.t == state->t);
    CHECK(c.state.cum_y == state->cum_y);
    REQUIRE(c.records.size() == part->records.size());
    for (std::size_t k = 0; k < c.records.size(); ++k) {
        CHECK(c.records[k].p == part->records[k].p);
        CHECK(c.records[k].y_hat == part->records[k].y_hat);
        CHECK(c.records[k].eta == part->records[k].eta);
    }
}

TEST_CASE("atomic writes create parent directories") {
    const fs::path p = scratch("nested/deeper/file.txt");
    fs::remove_all(p.parent_path().parent_path());
    write_file_atomic(p.string(), "hello");
    CHECK(read_file(p.string()) == "hello");
    write_file_atomic(p.string(), "again");
    CHECK(read_file(p.string()) == "again");
}
