#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <regex>

#include "odmp/analysis.hpp"
#include "odmp/config.hpp"
#include "odmp/errors.hpp"
#include "odmp/instance_io.hpp"
#include "odmp/instances.hpp"
#include "odmp/parallel.hpp"
#include "odmp/trace_io.hpp"

namespace odmp::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

const json* lookup(const json& cfg, const std::string& dotted) {
    const json* node = &cfg;
    std::size_t start = 0;
    while (start <= dotted.size()) {
        const std::size_t dot = dotted.find('.', start);
        const std::string key = dotted.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (!node->is_object() || !node->contains(key)) return nullptr;
        node = &(*node)[key];
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    return node;
}

template <class T>
T get(const json& cfg, const std::string& key, T fallback) {
    const json* node = lookup(cfg, key);
    if (!node) return fallback;
    try {
        return node->get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + key + "' has the wrong type");
    }
}

template <class T>
std::optional<T> get_opt(const json& cfg, const std::string& key) {
    if (!lookup(cfg, key)) return std::nullopt;
    return get<T>(cfg, key, T{});
}

// A scalar broadcast to m entries, or an explicit m-vector.
Vec vector_param(const json& cfg, const std::string& key, std::size_t m) {
    const json* node = lookup(cfg, key);
    if (!node) throw ConfigError("config key '" + key + "' is required");
    if (node->is_number()) return Vec(m, node->get<double>());
    Vec v = get<Vec>(cfg, key, {});
    if (v.size() != m) throw ConfigError("config key '" + key + "' must have " + std::to_string(m) + " entries");
    return v;
}

std::string fmt_number(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::string cell_tag(std::uint64_t seed, double gamma) { return "s" + std::to_string(seed) + "_g" + fmt_number(gamma); }

Instance generate_family(const json& sec, std::uint64_t seed) {
    const std::string family = get<std::string>(sec, "family", "okpfot");
    if (family == "okpfot") {
        OkpFotConfig c;
        c.n = get(sec, "n", c.n);
        c.m = get(sec, "m", c.m);
        c.T = get(sec, "T", c.T);
        c.rho = get(sec, "rho", c.rho);
        c.seed = seed;
        return gen_okpfot(c);
    }
    if (family == "aovc") {
        AovcConfig c;
        c.m = get(sec, "m", c.m);
        c.K = get(sec, "K", c.K);
        c.s = get(sec, "s", c.s);
        c.T = get(sec, "T", c.T);
        c.no_purchase_rate = get(sec, "no_purchase_rate", c.no_purchase_rate);
        c.type_weights = get(sec, "type_weights", c.type_weights);
        c.floor_scale = get(sec, "floor_scale", c.floor_scale);
        c.seed = seed;
        return gen_aovc_synthetic(c);
    }
    if (family == "assignment") {
        AssignmentConfig c;
        c.m = get(sec, "m", c.m);
        c.tasks_min = get(sec, "tasks_min", c.tasks_min);
        c.tasks_max = get(sec, "tasks_max", c.tasks_max);
        c.T = get(sec, "T", c.T);
        c.rho = get(sec, "rho", c.rho);
        c.seed = seed;
        return gen_assignment(c);
    }
    if (family == "example2") {
        const std::string sc = get<std::string>(sec, "scenario", "A");
        if (sc != "A" && sc != "B") throw ConfigError("example2 scenario must be \"A\" or \"B\"");
        return gen_example2(get<std::size_t>(sec, "T", 1000), sc == "A" ? Example2Scenario::A : Example2Scenario::B);
    }
    throw ConfigError("unknown instance family '" + family + "'");
}

std::vector<std::uint64_t> seed_list(const Options& opt, const json& cfg, const std::string& key) {
    std::vector<std::uint64_t> seeds = opt.seeds;
    if (seeds.empty()) {
        if (lookup(cfg, key)) {
            seeds = get<std::vector<std::uint64_t>>(cfg, key, {});
            if (seeds.empty()) throw ConfigError("seed list is empty");
        } else {
            seeds = {get<std::uint64_t>(cfg, "instance.seed", 1)};
        }
    }
    return seeds;
}

json read_json_file(const std::string& path) {
    try {
        return json::parse(read_file(path));
    } catch (const json::parse_error& e) {
        throw IoError("corrupt JSON file " + path + ": " + e.what());
    }
}

struct RunPlan {
    json cfg;
    std::string hash;
    std::optional<Instance> shared;  // set unless every seed regenerates the instance
    bool reseed = false;
    std::string model;
    std::string partition;
    std::size_t K = 0;
    StepMode mode = StepMode::Diminishing;
    std::optional<json> goal_override;
    std::size_t checkpoint_every = 10000;
    std::size_t estimate_iters = 0;
    std::string out_dir;
};

ArrivalOrder make_order(const RunPlan& plan, const Instance& inst, std::uint64_t seed) {
    const std::size_t T = inst.horizon();
    if (plan.model == "identity") return identity_order(T);
    if (plan.model == "uniform") return uniform_permutation(T, seed);
    Partition part = plan.partition == "type" ? type_partition(inst.steps)
                                              : named_partition(parse_partition_kind(plan.partition), T, plan.K);
    if (plan.model == "grouped") return grouped_permutation(part, seed);
    if (plan.model == "batched") return batched_order(part);
    throw ConfigError("unknown input model '" + plan.model + "'");
}

json run_cell(const RunPlan& plan, std::uint64_t seed, double gamma) {
    const Instance inst = plan.shared ? *plan.shared : generate_family(plan.cfg.at("instance"), seed);
    const ArrivalOrder order = make_order(plan, inst, seed);
    StepSchedule sched{gamma, plan.mode, std::nullopt};
    if (plan.mode == StepMode::Constant) sched.horizon = inst.horizon();
    sched.validate();

    const std::size_t m = inst.dim();
    std::optional<Vec> y_lo, y_hi;
    GoalSpec goal = inst.goal;
    if (plan.goal_override) {
        const json& g = *plan.goal_override;
        if (get<std::string>(g, "kind", "") == "boxed") {
            y_lo = vector_param(g, "y_lower", m);
            y_hi = vector_param(g, "y_upper", m);
        } else {
            goal = goal_from_json(g);
            if (goal.dim() != m) throw ConfigError("goal override dimension differs from the instance");
        }
    }

    const std::string tag = cell_tag(seed, gamma);
    const std::string cell_hash = fnv1a_hex(plan.hash + "/" + tag);
    const fs::path ckpt_path = fs::path(plan.out_dir) / ("checkpoint_" + tag + ".json");

    RunOptions ro;
    ro.keep_decisions = false;
    ro.checkpoint_every = plan.checkpoint_every;
    ro.on_checkpoint = [&](const DualState& st, const RunTrace& tr) {
        write_file_atomic(ckpt_path.string(), checkpoint_to_json(st, tr, cell_hash).dump());
    };
    std::optional<Checkpoint> cp;
    std::optional<RunTrace> resumed;
    if (fs::exists(ckpt_path)) {
        Checkpoint c = checkpoint_from_json(read_json_file(ckpt_path.string()));
        if (c.config_hash == cell_hash) {
            cp = std::move(c);
            resumed.emplace(RunTrace{.records = cp->records,
                                     .goal = goal,
                                     .constants = inst.constants,
                                     .schedule = sched,
                                     .algorithm = y_lo ? "boxed" : "standard",
                                     .order = order.order,
                                     .p_final = {},
                                     .box_violations = cp->box_violations});
            ro.resume_state = &cp->state;
            ro.resume_trace = &*resumed;
            std::cerr << "resuming " << tag << " at step " << cp->state.t << "\n";
        }
    }

    const RunTrace trace = y_lo ? run_online_boxed(inst.steps, order.order, goal, *y_lo, *y_hi, inst.constants, sched, ro)
                                : run_online(inst.steps, order.order, goal, inst.constants, sched, ro);
    const MetricSeries metrics = compute_metrics(trace);
    write_file_atomic((fs::path(plan.out_dir) / ("trace_" + tag + ".csv")).string(), metrics_to_csv(metrics));

    double max_p = 0.0;
    for (const StepRecord& r : trace.records) max_p = std::max(max_p, r.p_norm);
    const double bound = dual_norm_bound(inst.constants);
    const std::size_t T = trace.records.size();
    json summary = {{"config_hash", plan.hash},
                    {"instance_hash", instance_hash(inst)},
                    {"family", inst.family},
                    {"seed", seed},
                    {"gamma", gamma},
                    {"T", T},
                    {"m", m},
                    {"algorithm", trace.algorithm},
                    {"input_model", order.model},
                    {"reward_avg", metrics.reward_avg.back()},
                    {"goalvio_avg", metrics.goalvio_avg.back()},
                    {"goalvio_slope", goalvio_slope(metrics)},
                    {"max_p_norm", max_p},
                    {"box_violations", trace.box_violations},
                    {"dual_norm_bound",
                     {{"bound", bound}, {"applicable", gamma <= 1.0}, {"holds", max_p <= bound}}}};
    if (!std::isfinite(summary["goalvio_slope"].get<double>())) summary["goalvio_slope"] = "converged";
    if (plan.estimate_iters > 0) {
        const DualEstimate est = estimate_dual_optimum(inst.steps, trace.goal, inst.constants, plan.estimate_iters, seed);
        const double regret = dual_regret(trace, est.zf_upper);
        summary["zf_upper"] = est.zf_upper;
        summary["dual_regret"] = regret;
        summary["dual_regret_per_sqrt_mT"] = regret / std::sqrt(double(m) * double(T));
    }
    write_file_atomic((fs::path(plan.out_dir) / ("summary_" + tag + ".json")).string(), summary.dump(2) + "\n");
    std::error_code ec;
    fs::remove(ckpt_path, ec);
    return summary;
}

}  // namespace

std::string resolve_out_dir(const Options& opt, const json& cfg) {
    if (!opt.out.empty()) return opt.out;
    if (const auto dir = get_opt<std::string>(cfg, "output.dir")) return *dir;
    if (const char* env = std::getenv("ODMP_OUT_DIR"); env && *env) return env;
    return ".";
}

int cmd_generate(const Options& opt) {
    const json cfg = load_config(opt.config_path);
    const json sec = cfg.value("instance", json::object());
    const std::string out_dir = resolve_out_dir(opt, cfg);
    const bool binary = get(cfg, "output.binary", false);
    for (std::uint64_t seed : seed_list(opt, cfg, "instance.seeds")) {
        const Instance inst = generate_family(sec, seed);
        const std::string stem = inst.family + "_seed" + std::to_string(seed);
        const fs::path path = fs::path(out_dir) / (stem + (binary ? ".bin" : ".jsonl"));
        save_instance(inst, path.string(), binary);
        const json meta = {{"path", path.filename().string()},
                           {"family", inst.family},
                           {"seed", seed},
                           {"T", inst.horizon()},
                           {"m", inst.dim()},
                           {"instance_hash", instance_hash(inst)},
                           {"config_hash", config_hash(cfg)},
                           {"constants", constants_to_json(inst.constants)}};
        write_file_atomic((fs::path(out_dir) / (stem + ".meta.json")).string(), meta.dump(2) + "\n");
        std::cout << path.string() << " " << meta["instance_hash"].get<std::string>() << "\n";
    }
    return 0;
}

int cmd_run(const Options& opt) {
    RunPlan plan;
    plan.cfg = load_config(opt.config_path);
    const json& cfg = plan.cfg;
    if (!cfg.contains("instance")) throw ConfigError("run config needs an [instance] section");

    const std::vector<std::uint64_t> seeds = seed_list(opt, cfg, "input.seeds");
    std::vector<double> gammas = opt.gammas;
    if (gammas.empty()) {
        gammas = get<std::vector<double>>(cfg, "schedule.gamma_list", {});
        if (gammas.empty()) gammas = {get(cfg, "schedule.gamma", 1.0)};
    }
    for (double g : gammas)
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("every gamma must be > 0");

    const std::string mode = get<std::string>(cfg, "schedule.mode", "diminishing");
    if (mode == "constant")
        plan.mode = StepMode::Constant;
    else if (mode != "diminishing")
        throw ConfigError("schedule.mode must be \"diminishing\" or \"constant\"");
    plan.model = get<std::string>(cfg, "input.model", "identity");
    plan.partition = get<std::string>(cfg, "input.partition", "type");
    plan.K = get<std::size_t>(cfg, "input.K", 0);
    plan.checkpoint_every = get<std::size_t>(cfg, "run.checkpoint_every", 10000);
    plan.estimate_iters = get<std::size_t>(cfg, "run.dual_estimate_iters", 0);
    if (cfg.contains("goal")) plan.goal_override = cfg.at("goal");
    plan.reseed = get(cfg, "instance.reseed", false);
    plan.out_dir = resolve_out_dir(opt, cfg);

    // The resolved configuration, with the command-line overrides folded in.
    json resolved = cfg;
    resolved["input"]["seeds"] = seeds;
    resolved["schedule"]["gamma_list"] = gammas;
    plan.hash = config_hash(resolved);

    if (const auto path = get_opt<std::string>(cfg, "instance.path")) {
        if (plan.reseed) throw ConfigError("instance.reseed cannot be combined with instance.path");
        plan.shared = load_instance(*path);
        resolved["instance"]["instance_hash"] = instance_hash(*plan.shared);
    } else if (!plan.reseed) {
        plan.shared = generate_family(cfg.at("instance"), get<std::uint64_t>(cfg, "instance.seed", 1));
    }

    fs::create_directories(plan.out_dir);
    write_file_atomic((fs::path(plan.out_dir) / "run_manifest.json").string(),
                      json{{"config_hash", plan.hash}, {"config", resolved}}.dump(2) + "\n");

    struct Cell {
        std::uint64_t seed;
        double gamma;
    };
    std::vector<Cell> cells;
    for (std::uint64_t s : seeds)
        for (double g : gammas) cells.push_back({s, g});
    std::vector<json> results(cells.size());
    if (opt.workers > 0) set_worker_count(opt.workers);
    for_each_index(cells.size(), [&](std::size_t k) { results[k] = run_cell(plan, cells[k].seed, cells[k].gamma); });

    for (const json& r : results)
        std::cout << cell_tag(r["seed"].get<std::uint64_t>(), r["gamma"].get<double>())
                  << " reward_avg=" << r["reward_avg"].get<double>() << " goalvio_avg=" << r["goalvio_avg"].get<double>()
                  << " max_p_norm=" << r["max_p_norm"].get<double>() << "\n";
    return 0;
}

int cmd_analyze(const Options& opt) {
    const json cfg = opt.config_path.empty() ? json::object() : load_config(opt.config_path);
    const std::string out_dir = resolve_out_dir(opt, cfg);
    const std::string trace_dir = opt.trace_dir.empty() ? out_dir : opt.trace_dir;
    // A table-only analysis needs no traces.
    const bool tables_only = cfg.contains("unevenness") && opt.trace_dir.empty() && !fs::is_directory(trace_dir);
    if (tables_only)
        fs::create_directories(out_dir);
    else if (!fs::is_directory(trace_dir))
        throw IoError("trace directory " + trace_dir + " does not exist");

    const std::regex name_re(R"(trace_s(\d+)_g([^/]+)\.csv)");
    std::map<std::string, std::vector<MetricSeries>> by_gamma;
    std::map<std::string, std::vector<json>> summaries;
    std::vector<fs::path> files;
    if (!tables_only)
        for (const auto& e : fs::directory_iterator(trace_dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const fs::path& p : files) {
        std::smatch mt;
        const std::string name = p.filename().string();
        if (!std::regex_match(name, mt, name_re)) continue;
        const std::string g = mt[2];
        by_gamma[g].push_back(metrics_from_csv(read_file(p.string())));
        const fs::path sp = p.parent_path() / ("summary_s" + std::string(mt[1]) + "_g" + g + ".json");
        if (fs::exists(sp)) summaries[g].push_back(read_json_file(sp.string()));
    }

    json report = {{"trace_dir", trace_dir}, {"gamma", json::object()}};
    if (by_gamma.empty() && !cfg.contains("unevenness")) throw IoError("no trace files in " + trace_dir);
    for (const auto& [g, runs] : by_gamma) {
        const AggregateSeries agg = aggregate(runs);
        write_file_atomic((fs::path(out_dir) / ("aggregate_g" + g + ".csv")).string(), aggregate_to_csv(agg));
        const double slope = goalvio_slope(mean_series(agg));
        json entry = {{"runs", agg.runs},
                      {"T", agg.t.back()},
                      {"reward_avg", {{"mean", agg.reward_avg.mean.back()},
                                      {"min", agg.reward_avg.min.back()},
                                      {"max", agg.reward_avg.max.back()}}},
                      {"goalvio_avg", {{"mean", agg.goalvio_avg.mean.back()},
                                       {"min", agg.goalvio_avg.min.back()},
                                       {"max", agg.goalvio_avg.max.back()}}},
                      {"goalvio_slope", std::isfinite(slope) ? json(slope) : json("converged")}};
        double regret = 0.0;
        std::size_t with_regret = 0;
        for (const json& s : summaries[g])
            if (s.contains("dual_regret")) {
                regret += s["dual_regret"].get<double>();
                ++with_regret;
            }
        if (with_regret > 0) entry["dual_regret_mean"] = regret / double(with_regret);
        report["gamma"][g] = entry;
    }

    if (cfg.contains("unevenness")) {
        const std::size_t m = get<std::size_t>(cfg, "unevenness.m", 4);
        const auto Ts = get<std::vector<std::size_t>>(cfg, "unevenness.T", {128, 512, 2048, 8192});
        const auto kinds = get<std::vector<std::string>>(cfg, "unevenness.partitions",
                                                         {"half_half", "weekday_weekend", "k_periodic"});
        const std::size_t K = get<std::size_t>(cfg, "unevenness.K", 8);
        const StepSchedule sched{get(cfg, "unevenness.gamma", 1.0), StepMode::Diminishing, std::nullopt};
        std::string csv = "partition,T,W\n";
        json table = json::object();
        for (const std::string& kind : kinds) {
            std::vector<std::size_t> ts;
            Vec ws;
            for (std::size_t T : Ts) {
                const UnevennessReport rep = unevenness(named_partition(parse_partition_kind(kind), T, K), sched, m);
                ts.push_back(T);
                ws.push_back(rep.W);
                csv += kind + "," + std::to_string(T) + "," + fmt_number(rep.W) + "\n";
            }
            table[kind] = {{"T", ts}, {"W", ws}, {"exponent", loglog_slope(ts, ws, ts.front(), ts.back())}};
        }
        write_file_atomic((fs::path(out_dir) / "unevenness.csv").string(), csv);
        report["unevenness"] = table;
    }

    report["config_hash"] = config_hash(cfg);
    const fs::path out = fs::path(out_dir) / "analysis_report.json";
    write_file_atomic(out.string(), report.dump(2) + "\n");
    std::cout << out.string() << "\n";
    return 0;
}

}  // namespace odmp::cli
