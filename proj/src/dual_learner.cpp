#include "odmp/dual_learner.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <numeric>

#include "odmp/errors.hpp"
#include "odmp/parallel.hpp"
#include "odmp/rng.hpp"

namespace odmp {

void InstanceConstants::validate() const {
    if (!(d_y >= 0.0) || !(d_r >= 0.0) || !(d_lower > 0.0) || !std::isfinite(d_y) || !std::isfinite(d_r) ||
        !std::isfinite(d_lower))
        throw ConfigError("instance constants need d_y >= 0, d_r >= 0, d_lower > 0 (all finite)");
    if (m == 0) throw ConfigError("instance constants: m must be >= 1");
}

double dual_norm_bound(const InstanceConstants& c) {
    return (c.d_y * c.d_y + 2.0 * c.d_r) / (2.0 * c.d_lower) + c.d_y / std::sqrt(double(c.m));
}

void StepSchedule::validate() const {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw ConfigError("step schedule: gamma must be > 0");
    if (mode == StepMode::Constant && (!horizon || *horizon == 0))
        throw ConfigError("step schedule: constant mode requires a horizon T >= 1");
}

double step_size(const StepSchedule& sched, std::size_t t, std::size_t m) {
    if (t == 0 || m == 0) throw ConfigError("step_size: need t >= 1 and m >= 1");
    const double md = static_cast<double>(m);
    if (sched.mode == StepMode::Constant) {
        if (!sched.horizon || *sched.horizon == 0) throw ConfigError("constant step schedule requires a horizon");
        return sched.gamma / std::sqrt(md * static_cast<double>(*sched.horizon));
    }
    return std::min(sched.gamma / md, sched.gamma / std::sqrt(md * static_cast<double>(t)));
}

namespace {

RunTrace run_loop(std::span<const LocalStep> steps, std::span<const std::size_t> order, const GoalSpec& goal,
                  const InstanceConstants& constants, const StepSchedule& sched, const RunOptions& opts,
                  const Vec* y_lower, const Vec* y_upper) {
    if (steps.empty()) throw ConfigError("run_online: empty stream");
    sched.validate();
    const std::size_t m = goal.dim();
    const std::size_t T = order.empty() ? steps.size() : order.size();

    std::vector<std::size_t> slots(order.begin(), order.end());
    if (slots.empty()) {
        slots.resize(T);
        std::iota(slots.begin(), slots.end(), std::size_t{0});
    }
    for (std::size_t s : slots)
        if (s >= steps.size()) throw ConfigError("run_online: order refers to a step outside the family");

    RunTrace trace{.records = {},
                   .goal = goal,
                   .constants = constants,
                   .schedule = sched,
                   .algorithm = y_lower ? "boxed" : "standard",
                   .order = slots,
                   .p_final = {},
                   .box_violations = 0};
    trace.records.reserve(T);

    DualState state;
    state.p.assign(m, 0.0);
    state.cum_y.assign(m, 0.0);
    if (opts.resume_state) {
        state = *opts.resume_state;
        if (!opts.resume_trace || opts.resume_trace->records.size() + 1 != state.t || state.p.size() != m)
            throw ConfigError("run_online: resume state does not match the resumed trace");
        trace.records = opts.resume_trace->records;
        trace.box_violations = opts.resume_trace->box_violations;
    }

    bool warned = false;
    for (; state.t <= T; ++state.t) {
        const std::size_t t = state.t;
        const LocalStep& step = steps[slots[t - 1]];
        if (impact_dim(step) != m) throw ConfigError("run_online: step impact dimension differs from goal");

        const LocalDecision d = solve(step, state.p);
        Vec v_hat = support_point(goal, state.p);
        const double eta = step_size(sched, t, m);

        if (y_lower) {
            for (std::size_t i = 0; i < m; ++i) {
                if (d.y[i] < (*y_lower)[i] || d.y[i] > (*y_upper)[i]) {
                    ++trace.box_violations;
                    if (!warned) {
                        std::cerr << "warning: impact at step " << t << " lies outside the box Y\n";
                        warned = true;
                    }
                    break;
                }
            }
        }

        StepRecord rec;
        rec.t = t;
        rec.p = state.p;
        rec.p_norm = norm2(state.p);
        rec.r_hat = d.r;
        if (opts.keep_decisions) rec.x_hat = d.x;
        rec.y_hat = d.y;
        rec.eta = eta;
        rec.oracle_obj = d.r - dot(state.p, d.y);

        Vec half(m);
        for (std::size_t i = 0; i < m; ++i) half[i] = state.p[i] - eta * (v_hat[i] - d.y[i]);
        Vec next = project_polar(goal, half);
        if (!all_finite(next) || !in_polar(goal, next))
            throw NumericalGuardError("dual price left the polar cone at step " + std::to_string(t));

        rec.v_hat = std::move(v_hat);
        state.p = std::move(next);
        axpy(1.0, d.y, state.cum_y);
        state.cum_r += d.r;
        trace.records.push_back(std::move(rec));

        if (opts.checkpoint_every > 0 && opts.on_checkpoint && t % opts.checkpoint_every == 0 && t < T) {
            DualState snap = state;
            snap.t = t + 1;
            opts.on_checkpoint(snap, trace);
        }
    }
    trace.p_final = state.p;
    return trace;
}

}  // namespace

RunTrace run_online(std::span<const LocalStep> steps, std::span<const std::size_t> order, const GoalSpec& goal,
                    const InstanceConstants& constants, const StepSchedule& sched, const RunOptions& opts) {
    return run_loop(steps, order, goal, constants, sched, opts, nullptr, nullptr);
}

RunTrace run_online(std::span<const LocalStep> steps, const GoalSpec& goal, const InstanceConstants& constants,
                    const StepSchedule& sched) {
    return run_loop(steps, {}, goal, constants, sched, {}, nullptr, nullptr);
}

RunTrace run_online_boxed(std::span<const LocalStep> steps, std::span<const std::size_t> order,
                          const GoalSpec& inner_goal, const Vec& y_lower, const Vec& y_upper,
                          const InstanceConstants& constants, const StepSchedule& sched, const RunOptions& opts) {
    const GoalSpec boxed = GoalSpec::boxed(inner_goal, y_lower, y_upper);
    return run_loop(steps, order, boxed, constants, sched, opts, &y_lower, &y_upper);
}

double dual_objective(std::span<const LocalStep> steps, const GoalSpec& goal, ConstVecView p) {
    if (!in_polar(goal, p)) return std::numeric_limits<double>::infinity();
    return evaluate_dual(steps, goal, p).value;
}

DualEstimate estimate_dual_optimum(std::span<const LocalStep> steps, const GoalSpec& goal,
                                   const InstanceConstants& constants, std::size_t iters, std::uint64_t seed) {
    if (iters == 0) throw ConfigError("estimate_dual_optimum: iters must be >= 1");
    const std::size_t m = goal.dim();
    const double radius = constants.d_lower > 0.0 && constants.d_r > 0.0 ? constants.d_r / constants.d_lower : 1.0;

    DualEstimate est;
    est.p_star.assign(m, 0.0);
    est.zf_upper = std::numeric_limits<double>::infinity();
    est.best_history.reserve(iters);

    Vec start_b(m);
    Rng rng(seed, 0xD0A1);
    for (double& v : start_b) v = rng.normal();
    start_b = project_polar(goal, start_b);
    // One common scale keeps the start inside the cone.
    const double nb = norm2(start_b);
    const double len = radius * rng.uniform01();
    if (nb > 0.0)
        for (double& v : start_b) v *= len / nb;

    // Stage j runs subgradient steps of scale radius / 10^j, warm-started at
    // the best point found so far. Stage 0 alternates between p = 0 and the
    // seeded start.
    constexpr std::size_t kStages = 4;
    std::size_t it = 0;
    auto consider = [&](const Vec& p, const DualPoint& dp) {
        if (in_polar(goal, p) && dp.value < est.zf_upper) {
            est.zf_upper = dp.value;
            est.p_star = p;
        }
        est.best_history.push_back(est.zf_upper);
    };
    double scale = radius;
    for (std::size_t stage = 0; stage < kStages && it < iters; ++stage, scale /= 10.0) {
        const std::size_t budget = stage + 1 == kStages ? iters - it : iters / kStages;
        std::vector<Vec> chains;
        if (stage == 0)
            chains = {Vec(m, 0.0), start_b};
        else
            chains = {est.p_star};
        std::vector<std::size_t> k_chain(chains.size(), 0);
        for (std::size_t local = 0; local < budget && it < iters; ++local, ++it) {
            const std::size_t c = local % chains.size();
            Vec& p = chains[c];
            const DualPoint dp = evaluate_dual(steps, goal, p);
            consider(p, dp);
            const double gnorm = norm2(dp.subgradient);
            if (gnorm == 0.0) continue;
            const double alpha = scale / (std::sqrt(double(++k_chain[c])) * gnorm);
            Vec next(m);
            for (std::size_t i = 0; i < m; ++i) next[i] = p[i] - alpha * dp.subgradient[i];
            p = project_polar(goal, next);
        }
    }
    return est;
}

double dual_regret(const RunTrace& trace, double zr_reference) {
    double s = 0.0;
    for (const StepRecord& r : trace.records) s += dot(r.p, r.v_hat) + r.oracle_obj;
    return s - zr_reference;
}

}  // namespace odmp
