#pragma once

// The Fenchel-dual online algorithm. Each step t:
//
//   (r̂, x̂, ŷ)  = argmax { r - p·y : (r, x, y) in Omega^t }   local oracle
//   v̂          = argmax { p·v : v in Q }                       goal support
//   p          <- proj_{C°}( p - eta_t (v̂ - ŷ) )
//
// starting from p = 0. The boxed variant runs the same loop on Psi ∩ Y, so
// Q = Psi ∩ Y and the projection is the identity.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>

#include "odmp/goalset.hpp"
#include "odmp/oracles.hpp"

namespace odmp {

/// Constants of the standing assumptions: every impact vector is within d_y
/// of Q in l∞, some convex combination gives reward within d_r of the best
/// while sitting d_lower deep inside Psi.
struct InstanceConstants {
    double d_y = 0.0;
    double d_r = 0.0;
    double d_lower = 1.0;
    std::size_t m = 0;

    void validate() const;
};

/// Upper bound on max_t ||p^t||_2 for schedules with eta_t <= 1/m.
double dual_norm_bound(const InstanceConstants& c);

enum class StepMode { Diminishing, Constant };

struct StepSchedule {
    double gamma = 1.0;
    StepMode mode = StepMode::Diminishing;
    std::optional<std::size_t> horizon;

    void validate() const;
};

/// min(gamma/m, gamma/sqrt(m t)) or, in constant mode, gamma/sqrt(m T).
double step_size(const StepSchedule& sched, std::size_t t, std::size_t m);

struct DualState {
    Vec p;
    std::size_t t = 1;  // index of the next step to run
    Vec cum_y;
    double cum_r = 0.0;
};

struct StepRecord {
    std::size_t t = 0;
    Vec p;  // p^t, the price the step was solved at
    double p_norm = 0.0;
    double r_hat = 0.0;
    Vec x_hat;
    Vec y_hat;
    Vec v_hat;
    double eta = 0.0;
    double oracle_obj = 0.0;  // r̂ - p^t·ŷ
};

struct RunTrace {
    std::vector<StepRecord> records;
    GoalSpec goal;
    InstanceConstants constants;
    StepSchedule schedule;
    std::string algorithm = "standard";  // or "boxed"
    std::vector<std::size_t> order;      // slot -> index into the step family
    Vec p_final;                          // p^{T+1}
    std::size_t box_violations = 0;      // boxed runs: steps with ŷ outside Y
};

struct RunOptions {
    /// Invoke `on_checkpoint` every this many committed steps (0 = never).
    std::size_t checkpoint_every = 0;
    std::function<void(const DualState&, const RunTrace&)> on_checkpoint;
    /// Resume from a saved state and the records produced so far.
    const DualState* resume_state = nullptr;
    const RunTrace* resume_trace = nullptr;
    /// Keep x̂ in the records (large for assignment instances).
    bool keep_decisions = true;
};

/// Runs the online loop over steps[order[0]], steps[order[1]], ... The step at
/// slot t is read only after slots < t are committed. An empty order means
/// the identity order.
RunTrace run_online(std::span<const LocalStep> steps, std::span<const std::size_t> order, const GoalSpec& goal,
                    const InstanceConstants& constants, const StepSchedule& sched, const RunOptions& opts = {});

RunTrace run_online(std::span<const LocalStep> steps, const GoalSpec& goal, const InstanceConstants& constants,
                    const StepSchedule& sched);

/// The variant on Psi ∩ Y. Steps whose ŷ falls outside Y are counted in
/// `box_violations` (and reported on stderr once per run).
RunTrace run_online_boxed(std::span<const LocalStep> steps, std::span<const std::size_t> order,
                          const GoalSpec& inner_goal, const Vec& y_lower, const Vec& y_upper,
                          const InstanceConstants& constants, const StepSchedule& sched, const RunOptions& opts = {});

/// Offline Fenchel dual value sum_t [h_Psi(p) + oracle_value_t(p)]; +infinity
/// when p is outside C°.
double dual_objective(std::span<const LocalStep> steps, const GoalSpec& goal, ConstVecView p);

struct DualEstimate {
    Vec p_star;
    double zf_upper = 0.0;
    std::vector<double> best_history;  // best value after each iteration
};

/// Projected subgradient descent on the offline dual with normalized steps
/// scale/(sqrt(k) ||g_k||). The scale starts at d_r/d_lower (the bound on the
/// optimal price norm) and shrinks tenfold per stage, each stage restarting
/// from the best point so far; the first stage also runs a chain from a
/// seeded random point of C°. Any iterate bounds the convexified optimum,
/// hence z*, from above.
DualEstimate estimate_dual_optimum(std::span<const LocalStep> steps, const GoalSpec& goal,
                                   const InstanceConstants& constants, std::size_t iters, std::uint64_t seed);

/// sum_t [p^t·v̂^t + oracle_obj_t] - reference.
double dual_regret(const RunTrace& trace, double zr_reference);

}  // namespace odmp
