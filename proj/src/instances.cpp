#include "odmp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "odmp/errors.hpp"
#include "odmp/rng.hpp"

namespace odmp {

namespace {

// Streams of the generator seed, one per kind of draw.
enum Stream : std::uint64_t { kItems = 1, kTypes = 2, kPrefs = 3, kCalib = 4, kRevenue = 5, kFloors = 6, kTasks = 7 };

std::vector<std::size_t> random_subset(std::size_t m, std::size_t s, Rng& rng) {
    std::vector<std::size_t> idx(m);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < s; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.below(m - i));
        std::swap(idx[i], idx[j]);
    }
    idx.resize(s);
    return idx;
}

// Scale c with mean_S 1/(1 + c V(S)) = rate over a fixed sample of
// assortments (the map is decreasing in c).
double calibrate_scale(const std::vector<double>& v, std::size_t s, double rate, Rng& rng) {
    constexpr std::size_t kSamples = 4000;
    std::vector<double> totals(kSamples);
    for (double& tot : totals) {
        tot = 0.0;
        for (std::size_t i : random_subset(v.size(), s, rng)) tot += v[i];
    }
    auto prob = [&](double c) {
        double acc = 0.0;
        for (double tot : totals) acc += 1.0 / (1.0 + c * tot);
        return acc / double(kSamples);
    };
    double lo = -30.0, hi = 30.0;  // log scale
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (prob(std::exp(mid)) > rate)
            lo = mid;
        else
            hi = mid;
    }
    return std::exp(0.5 * (lo + hi));
}

}  // namespace

void OkpFotConfig::validate() const {
    if (n == 0 || m == 0 || T == 0) throw ConfigError("okpfot: n, m, T must be >= 1");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("okpfot: rho must be > 0");
}

void AovcConfig::validate() const {
    if (m == 0 || K == 0 || T == 0) throw ConfigError("aovc: m, K, T must be >= 1");
    if (s < 1 || s > m) throw ConfigError("aovc: need 1 <= s <= m");
    if (!(no_purchase_rate > 0.0 && no_purchase_rate < 1.0)) throw ConfigError("aovc: no-purchase rate must be in (0,1)");
    if (!type_weights.empty()) {
        if (type_weights.size() != K) throw ConfigError("aovc: type_weights must have K entries");
        double tot = 0.0;
        for (double w : type_weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw ConfigError("aovc: type weights must be >= 0");
            tot += w;
        }
        if (!(tot > 0.0)) throw ConfigError("aovc: type weights sum to zero");
    }
    if (!(floor_scale >= 0.0)) throw ConfigError("aovc: floor_scale must be >= 0");
    if (floor_scale > 1.0) throw ConfigError("aovc: visibility floors would exceed the cardinality cap (Σf > s)");
}

void AssignmentConfig::validate() const {
    if (m == 0 || T == 0) throw ConfigError("assignment: m and T must be >= 1");
    if (tasks_min > tasks_max || tasks_max == 0) throw ConfigError("assignment: need 1 <= tasks_max, tasks_min <= tasks_max");
    if (!(rho > 0.0) || !std::isfinite(rho)) throw ConfigError("assignment: rho must be > 0");
}

Instance gen_okpfot(const OkpFotConfig& cfg) {
    cfg.validate();
    Instance inst{.family = "okpfot",
                  .steps = {},
                  .goal = GoalSpec::max_min_gap(cfg.m, cfg.rho, true),
                  .constants = {},
                  .seed = cfg.seed,
                  .config = {{"n", cfg.n}, {"m", cfg.m}, {"T", cfg.T}, {"rho", cfg.rho}, {"seed", cfg.seed}},
                  .notes = nlohmann::json::object()};
    Rng rng(cfg.seed, kItems);
    std::size_t clamped = 0;
    double d_y = 0.0, d_r = 0.0;
    const Vec zeros(cfg.m, 0.0);
    inst.steps.reserve(cfg.T);
    for (std::size_t t = 0; t < cfg.T; ++t) {
        KnapsackStep s;
        s.m = cfg.m;
        s.weights.resize(cfg.n);
        for (double& w : s.weights) w = rng.uniform(1.0, 1000.0);
        s.capacity = 0.3 * std::accumulate(s.weights.begin(), s.weights.end(), 0.0);
        s.utility.resize(cfg.m * cfg.n);
        for (std::size_t i = 0; i < cfg.m; ++i) {
            const double k = double(i + 1);
            for (std::size_t j = 0; j < cfg.n; ++j) {
                double u = rng.uniform(s.weights[j] - 20.0 * k, s.weights[j] + 40.0 * k);
                if (u < 0.0) {
                    u = 0.0;
                    ++clamped;
                }
                s.utility[i * cfg.n + j] = u;
            }
        }
        Vec rowsum(cfg.m, 0.0);
        for (std::size_t i = 0; i < cfg.m; ++i)
            for (std::size_t j = 0; j < cfg.n; ++j) rowsum[i] += s.u(i, j);
        d_y = std::max(d_y, max_linf_to_q(inst.goal, zeros, rowsum));
        d_r = std::max(d_r, max_reward(s));
        inst.steps.emplace_back(std::move(s));
    }
    inst.constants = InstanceConstants{d_y, d_r, cfg.rho / 2.0, cfg.m};
    inst.notes["clamped_negative_utilities"] = clamped;
    inst.notes["utility_clamp"] = "negative U draws set to 0";
    return inst;
}

Instance gen_aovc_synthetic(const AovcConfig& cfg) {
    cfg.validate();
    const std::size_t m = cfg.m;

    Rng rev_rng(cfg.seed, kRevenue);
    Vec revenue(m);
    for (double& r : revenue) r = rev_rng.uniform(1.0, 10.0);

    Rng floor_rng(cfg.seed, kFloors);
    Vec floors(m);
    const double base = cfg.floor_scale * double(cfg.s) / double(m);
    for (double& f : floors) f = std::min(base * floor_rng.uniform(0.5, 1.0), 0.95);
    const double floor_sum = std::accumulate(floors.begin(), floors.end(), 0.0);
    if (floor_sum > double(cfg.s)) throw ConfigError("aovc: infeasible floors (Σf > s)");

    Rng pref_rng(cfg.seed, kPrefs);
    Rng calib_rng(cfg.seed, kCalib);
    std::vector<Vec> prefs(cfg.K, Vec(m));
    for (auto& v : prefs) {
        for (double& x : v) x = std::exp(pref_rng.normal());
        const double c = calibrate_scale(v, cfg.s, cfg.no_purchase_rate, calib_rng);
        for (double& x : v) x *= c;
    }

    std::vector<double> weights = cfg.type_weights;
    if (weights.empty()) weights.assign(cfg.K, 1.0);
    std::vector<double> cdf(cfg.K);
    std::partial_sum(weights.begin(), weights.end(), cdf.begin());
    Rng type_rng(cfg.seed, kTypes);
    std::vector<std::size_t> types(cfg.T);
    for (std::size_t& k : types) {
        const double u = type_rng.uniform01() * cdf.back();
        k = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        k = std::min(k, cfg.K - 1);
    }

    Instance inst{.family = "aovc",
                  .steps = {},
                  .goal = GoalSpec::box(floors, Vec(m, 1.0)),
                  .constants = {},
                  .seed = cfg.seed,
                  .config = {{"m", cfg.m},
                             {"K", cfg.K},
                             {"s", cfg.s},
                             {"T", cfg.T},
                             {"no_purchase_rate", cfg.no_purchase_rate},
                             {"type_weights", cfg.type_weights},
                             {"floor_scale", cfg.floor_scale},
                             {"seed", cfg.seed}},
                  .notes = nlohmann::json::object()};
    inst.steps.reserve(cfg.T);
    for (std::size_t t = 0; t < cfg.T; ++t)
        inst.steps.emplace_back(AssortmentStep{revenue, prefs[types[t]], cfg.s, types[t]});

    double d_r = 0.0;
    for (std::size_t k = 0; k < cfg.K; ++k)
        d_r = std::max(d_r, max_reward(LocalStep{AssortmentStep{revenue, prefs[k], cfg.s, k}}));
    const double max_floor = *std::max_element(floors.begin(), floors.end());
    const double d_lower = std::min((1.0 - max_floor) / 2.0, (double(cfg.s) - floor_sum) / double(m));
    inst.constants = InstanceConstants{max_linf_to_q(inst.goal, Vec(m, 0.0), Vec(m, 1.0)), d_r, d_lower, m};
    inst.notes["floor_sum"] = floor_sum;
    inst.notes["preferences"] = prefs;
    return inst;
}

Instance gen_assignment(const AssignmentConfig& cfg) {
    cfg.validate();
    Instance inst{.family = "assignment",
                  .steps = {},
                  .goal = GoalSpec::max_min_gap(cfg.m, cfg.rho, false),
                  .constants = {},
                  .seed = cfg.seed,
                  .config = {{"m", cfg.m},
                             {"tasks_min", cfg.tasks_min},
                             {"tasks_max", cfg.tasks_max},
                             {"T", cfg.T},
                             {"rho", cfg.rho},
                             {"seed", cfg.seed}},
                  .notes = nlohmann::json::object()};
    Rng rng(cfg.seed, kTasks);
    double w_max = 0.0, q_max = 0.0;
    for (std::size_t t = 0; t < cfg.T; ++t) {
        AssignmentStep s;
        s.m = cfg.m;
        s.n = cfg.tasks_min + static_cast<std::size_t>(rng.below(cfg.tasks_max - cfg.tasks_min + 1));
        s.profit.resize(s.m * s.n);
        s.workload.resize(s.m * s.n);
        for (double& q : s.profit) q = rng.uniform(0.0, 10.0);
        for (double& w : s.workload) w = rng.uniform(0.0, 10.0);
        double q_step = 0.0;
        for (std::size_t j = 0; j < s.n; ++j) {
            double best = 0.0;
            for (std::size_t i = 0; i < s.m; ++i) best = std::max(best, s.q(i, j));
            q_step += best;
        }
        q_max = std::max(q_max, q_step);
        for (std::size_t i = 0; i < s.m; ++i) {
            double wi = 0.0;
            for (std::size_t j = 0; j < s.n; ++j) wi += s.w(i, j);
            w_max = std::max(w_max, wi);
        }
        inst.steps.emplace_back(std::move(s));
    }
    inst.constants = InstanceConstants{w_max, q_max, cfg.rho / 2.0, cfg.m};
    return inst;
}

Instance gen_example2(std::size_t T, Example2Scenario scenario) {
    if (T == 0 || T % 2 != 0) throw ConfigError("example2: T must be a positive even number");
    const bool b = scenario == Example2Scenario::B;
    Instance inst{.family = "example2",
                  .steps = {},
                  .goal = GoalSpec::box({0.0}, {1.0}),
                  .constants = InstanceConstants{2.0, 2.0, 0.5, 1},
                  .seed = 0,
                  .config = {{"T", T}, {"scenario", b ? "B" : "A"}},
                  .notes = nlohmann::json::object()};
    for (std::size_t t = 0; t < T; ++t) {
        KnapsackStep s;
        s.m = 1;
        if (t < T / 2) {
            s.weights = {2.0};
            s.capacity = 2.0;
            s.utility = {2.0};
            s.profit = {1.0};
        } else if (b) {
            s.weights = {2.0};
            s.capacity = 2.0;
            s.utility = {2.0};
            s.profit = {2.0};
        } else {
            s.weights = {1.0};
            s.capacity = 1.0;
            s.utility = {0.0};
            s.profit = {0.0};
        }
        inst.steps.emplace_back(std::move(s));
    }
    return inst;
}

double example2_offline_optimum(std::size_t T, Example2Scenario scenario) {
    return scenario == Example2Scenario::A ? double(T) / 2.0 : double(T);
}

Partition type_partition(const std::vector<LocalStep>& steps) {
    std::map<std::size_t, std::vector<std::size_t>> by_type;
    for (std::size_t t = 0; t < steps.size(); ++t) {
        const auto* a = std::get_if<AssortmentStep>(&steps[t]);
        if (!a) throw ConfigError("type_partition: steps must be assortment steps");
        by_type[a->type_id].push_back(t);
    }
    Partition p;
    for (auto& [k, idx] : by_type) {
        p.groups.push_back(std::move(idx));
        p.labels.push_back("type_" + std::to_string(k));
    }
    return p;
}

double no_purchase_probability(const std::vector<double>& pref, std::size_t s, std::size_t samples,
                               std::uint64_t seed) {
    Rng rng(seed, 0x50);
    double acc = 0.0;
    for (std::size_t k = 0; k < samples; ++k) {
        double tot = 0.0;
        for (std::size_t i : random_subset(pref.size(), s, rng)) tot += pref[i];
        acc += 1.0 / (1.0 + tot);
    }
    return acc / double(samples);
}

FairPoint fair_fractional_point(const AssignmentStep& step) {
    FairPoint fp;
    fp.lambda.assign(step.m, 0.0);
    fp.y.assign(step.m, 0.0);
    Vec total(step.m, 0.0), reward(step.m, 0.0);
    for (std::size_t i = 0; i < step.m; ++i)
        for (std::size_t j = 0; j < step.n; ++j) {
            total[i] += step.w(i, j);
            reward[i] += step.q(i, j);
        }
    for (std::size_t i = 0; i < step.m; ++i) {
        if (total[i] == 0.0) {  // that agent alone leaves every workload at 0
            fp.lambda[i] = 1.0;
            fp.r = reward[i];
            return fp;
        }
    }
    double inv_sum = 0.0;
    for (double w : total) inv_sum += 1.0 / w;
    for (std::size_t i = 0; i < step.m; ++i) {
        fp.lambda[i] = (1.0 / total[i]) / inv_sum;
        fp.y[i] = fp.lambda[i] * total[i];
        fp.r += fp.lambda[i] * reward[i];
    }
    return fp;
}

}  // namespace odmp
