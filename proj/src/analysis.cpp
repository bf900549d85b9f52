#include "odmp/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "odmp/errors.hpp"
#include "odmp/instances.hpp"

namespace odmp {

MetricSeries compute_metrics(const RunTrace& trace) {
    const std::size_t T = trace.records.size();
    const std::size_t m = trace.goal.dim();
    MetricSeries s;
    s.t.resize(T);
    s.reward_avg.resize(T);
    s.goalvio_avg.resize(T);
    s.p_norm.resize(T);
    s.eta.resize(T);
    Vec cum(m, 0.0), avg(m);
    double reward = 0.0;
    for (std::size_t k = 0; k < T; ++k) {
        const StepRecord& r = trace.records[k];
        const double t = double(k + 1);
        reward += r.r_hat;
        axpy(1.0, r.y_hat, cum);
        for (std::size_t i = 0; i < m; ++i) avg[i] = cum[i] / t;
        s.t[k] = k + 1;
        s.reward_avg[k] = reward / t;
        s.goalvio_avg[k] = distance_to_goal(trace.goal, avg);
        s.p_norm[k] = r.p_norm;
        s.eta[k] = r.eta;
    }
    return s;
}

AggregateSeries aggregate(std::span<const MetricSeries> runs) {
    if (runs.empty()) throw ConfigError("aggregate: no runs");
    const std::size_t T = runs[0].size();
    for (const MetricSeries& r : runs)
        if (r.t != runs[0].t) throw ConfigError("aggregate: runs have different t-grids");
    AggregateSeries a;
    a.t = runs[0].t;
    a.runs = runs.size();
    auto band = [&](Vec MetricSeries::*field) {
        Band b{Vec(T, 0.0), Vec(T, INFINITY), Vec(T, -INFINITY)};
        for (const MetricSeries& r : runs) {
            const Vec& v = r.*field;
            for (std::size_t k = 0; k < T; ++k) {
                b.mean[k] += v[k];
                b.min[k] = std::min(b.min[k], v[k]);
                b.max[k] = std::max(b.max[k], v[k]);
            }
        }
        for (double& x : b.mean) x /= double(runs.size());
        return b;
    };
    a.reward_avg = band(&MetricSeries::reward_avg);
    a.goalvio_avg = band(&MetricSeries::goalvio_avg);
    a.p_norm = band(&MetricSeries::p_norm);
    return a;
}

MetricSeries mean_series(const AggregateSeries& agg) {
    MetricSeries s;
    s.t = agg.t;
    s.reward_avg = agg.reward_avg.mean;
    s.goalvio_avg = agg.goalvio_avg.mean;
    s.p_norm = agg.p_norm.mean;
    return s;
}

Vec step_positions(const StepSchedule& sched, std::size_t T, std::size_t m) {
    Vec pos(T, 0.0);
    for (std::size_t t = 1; t < T; ++t) pos[t] = pos[t - 1] + step_size(sched, t, m);
    return pos;
}

// Both measures live on the same ordered support, so the distance is the
// integral of |F_group - F_all| against the position increments.
double wasserstein_to_uniform(const Vec& positions, const std::vector<std::size_t>& group) {
    const std::size_t T = positions.size();
    if (group.empty()) throw ConfigError("wasserstein_to_uniform: empty group");
    std::vector<std::size_t> count(T, 0);
    for (std::size_t g : group) {
        if (g >= T) throw ConfigError("wasserstein_to_uniform: slot outside the horizon");
        ++count[g];
    }
    const double n = double(group.size());
    double w = 0.0, inside = 0.0;
    for (std::size_t t = 0; t + 1 < T; ++t) {
        inside += double(count[t]);
        const double gap = std::abs(inside / n - double(t + 1) / double(T));
        w += gap * (positions[t + 1] - positions[t]);
    }
    return w;
}

UnevennessReport unevenness(const Partition& partition, const StepSchedule& sched, std::size_t m) {
    const std::size_t T = partition.horizon();
    partition.validate(T);
    UnevennessReport rep;
    rep.positions = step_positions(sched, T, m);
    for (const auto& g : partition.groups) {
        const double w = wasserstein_to_uniform(rep.positions, g);
        rep.w.push_back(w);
        rep.W += double(m) * double(g.size()) * w;
    }
    return rep;
}

namespace {

// Whether the box [lo, hi] can meet Psi; used only to discard subtrees, so it
// errs toward true.
bool box_meets_goal(const GoalSpec& goal, const Vec& lo, const Vec& hi, double slack) {
    const std::size_t m = lo.size();
    if (const auto* b = std::get_if<BoxGoal>(&goal.variant())) {
        for (std::size_t i = 0; i < m; ++i)
            if (lo[i] > b->upper[i] + slack || hi[i] < b->lower[i] - slack) return false;
        return true;
    }
    if (const auto* g = std::get_if<MaxMinGapGoal>(&goal.variant())) {
        const double max_lo = *std::max_element(lo.begin(), lo.end());
        const double min_hi = *std::min_element(hi.begin(), hi.end());
        const double l = g->nonneg ? std::max(max_lo - g->rho, 0.0) : max_lo - g->rho;
        return l <= min_hi + slack;
    }
    const auto& bx = std::get<BoxedGoal>(goal.variant());
    Vec a(m), c(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = std::max(lo[i], bx.y_lower[i]);
        c[i] = std::min(hi[i], bx.y_upper[i]);
        if (a[i] > c[i] + slack) return false;
        c[i] = std::max(a[i], c[i]);
    }
    return box_meets_goal(*bx.inner, a, c, slack);
}

struct Subtree {
    double best = -INFINITY;
    std::vector<std::size_t> choice;
    std::size_t leaves = 0;
};

}  // namespace

BruteForceResult offline_bruteforce(std::span<const LocalStep> steps, const GoalSpec& goal, std::size_t limit,
                                    Exec exec) {
    const std::size_t T = steps.size();
    const std::size_t m = goal.dim();
    if (T == 0) throw ConfigError("offline_bruteforce: empty stream");

    std::vector<std::vector<LocalDecision>> options(T);
    double combos = 1.0;
    for (std::size_t t = 0; t < T; ++t) {
        if (impact_dim(steps[t]) != m) throw ConfigError("offline_bruteforce: impact dimension differs from goal");
        options[t] = enumerate_decisions(steps[t], limit);
        combos *= double(options[t].size());
        if (combos > double(limit))
            throw ConfigError("offline_bruteforce: more than " + std::to_string(limit) + " decision combinations");
    }

    // Suffix bounds: best remaining reward and the box of remaining impacts.
    Vec reward_suffix(T + 1, 0.0);
    std::vector<Vec> lo_suffix(T + 1, Vec(m, 0.0)), hi_suffix(T + 1, Vec(m, 0.0));
    for (std::size_t t = T; t-- > 0;) {
        double rmax = -INFINITY;
        Vec lo(m, INFINITY), hi(m, -INFINITY);
        for (const LocalDecision& d : options[t]) {
            rmax = std::max(rmax, d.r);
            for (std::size_t i = 0; i < m; ++i) {
                lo[i] = std::min(lo[i], d.y[i]);
                hi[i] = std::max(hi[i], d.y[i]);
            }
        }
        reward_suffix[t] = reward_suffix[t + 1] + rmax;
        for (std::size_t i = 0; i < m; ++i) {
            lo_suffix[t][i] = lo_suffix[t + 1][i] + lo[i];
            hi_suffix[t][i] = hi_suffix[t + 1][i] + hi[i];
        }
    }

    const double Td = double(T);
    auto search = [&](std::size_t first) {
        Subtree st;
        std::vector<std::size_t> choice(T, 0);
        Vec cum(m, 0.0), lo(m), hi(m), avg(m);
        auto dfs = [&](auto&& self, std::size_t t, double reward) -> void {
            if (t == T) {
                ++st.leaves;
                for (std::size_t i = 0; i < m; ++i) avg[i] = cum[i] / Td;
                if (reward > st.best && distance_to_goal(goal, avg) <= kMembershipTol) {
                    st.best = reward;
                    st.choice = choice;
                }
                return;
            }
            if (reward + reward_suffix[t] <= st.best) return;
            for (std::size_t i = 0; i < m; ++i) {
                lo[i] = (cum[i] + lo_suffix[t][i]) / Td;
                hi[i] = (cum[i] + hi_suffix[t][i]) / Td;
            }
            if (!box_meets_goal(goal, lo, hi, 1e-9)) return;
            for (std::size_t k = 0; k < options[t].size(); ++k) {
                const LocalDecision& d = options[t][k];
                choice[t] = k;
                axpy(1.0, d.y, cum);
                self(self, t + 1, reward + d.r);
                axpy(-1.0, d.y, cum);
            }
        };
        choice[0] = first;
        axpy(1.0, options[0][first].y, cum);
        dfs(dfs, 1, options[0][first].r);
        return st;
    };

    std::vector<Subtree> parts(options[0].size());
    for_each_index(parts.size(), [&](std::size_t k) { parts[k] = search(k); }, exec);

    BruteForceResult res;
    const Subtree* winner = nullptr;
    for (const Subtree& st : parts) {
        res.leaves += st.leaves;
        if (!st.choice.empty() && (!winner || st.best > winner->best)) winner = &st;
    }
    if (winner) {
        res.feasible = true;
        res.z_star = winner->best;
        for (std::size_t t = 0; t < T; ++t) res.decisions.push_back(options[t][winner->choice[t]]);
    }
    return res;
}

double loglog_slope(std::span<const std::size_t> t, std::span<const double> values, std::size_t t_lo,
                    std::size_t t_hi) {
    if (t.size() != values.size()) throw ConfigError("loglog_slope: length mismatch");
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    std::size_t n = 0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (t[k] < t_lo || t[k] > t_hi) continue;
        if (!(values[k] > 0.0)) return -INFINITY;
        const double x = std::log(double(t[k])), y = std::log(values[k]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
    }
    if (n < 2) throw ConfigError("loglog_slope: fewer than two points in the window");
    const double nd = double(n);
    return (nd * sxy - sx * sy) / (nd * sxx - sx * sx);
}

double goalvio_slope(const MetricSeries& s) {
    if (s.t.empty()) throw ConfigError("goalvio_slope: empty series");
    const std::size_t T = s.t.back();
    return loglog_slope(s.t, s.goalvio_avg, std::max<std::size_t>(1, T / 10), T);
}

Example2Gap example2_gap(std::size_t T) {
    Example2Gap g;
    const StepSchedule sched{};
    for (Example2Scenario sc : {Example2Scenario::A, Example2Scenario::B}) {
        const Instance inst = gen_example2(T, sc);
        const RunTrace tr = run_online(inst.steps, inst.goal, inst.constants, sched);
        double reward = 0.0;
        for (const StepRecord& r : tr.records) reward += r.r_hat;
        const double ratio = reward / example2_offline_optimum(T, sc);
        if (sc == Example2Scenario::A) {
            g.reward_a = reward;
            g.ratio_accept_all = ratio;
        } else {
            g.reward_b = reward;
            g.ratio_reject_then_accept = ratio;
        }
    }
    return g;
}

}  // namespace odmp
