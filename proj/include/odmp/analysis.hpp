#pragma once

// Evaluation quantities: running reward and goal violation, the stepsize
// Wasserstein unevenness of a partition, exact offline baselines on tiny
// instances, and rate fitting.

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "odmp/dual_learner.hpp"
#include "odmp/input_models.hpp"
#include "odmp/parallel.hpp"

namespace odmp {

struct MetricSeries {
    std::vector<std::size_t> t;
    Vec reward_avg;   // Reward_t / t
    Vec goalvio_avg;  // dist(Σ ŷ / t, Psi)
    Vec p_norm;       // ||p^t||
    Vec eta;

    std::size_t size() const { return t.size(); }
};

MetricSeries compute_metrics(const RunTrace& trace);

struct Band {
    Vec mean;
    Vec min;
    Vec max;
};

/// Pointwise mean and range over runs sharing one t-grid.
struct AggregateSeries {
    std::vector<std::size_t> t;
    Band reward_avg;
    Band goalvio_avg;
    Band p_norm;
    std::size_t runs = 0;
};

AggregateSeries aggregate(std::span<const MetricSeries> runs);

/// Mean series of an aggregate as a plain MetricSeries (eta left empty).
MetricSeries mean_series(const AggregateSeries& agg);

/// S_t = sum_{tau < t} eta^tau for t = 1..T (S_1 = 0).
Vec step_positions(const StepSchedule& sched, std::size_t T, std::size_t m);

/// Earth mover's distance on the line between the uniform measure on the
/// positions of `group` (0-based slots) and the uniform measure on all slots.
double wasserstein_to_uniform(const Vec& positions, const std::vector<std::size_t>& group);

struct UnevennessReport {
    Vec w;          // per group
    double W = 0.0;  // sum_k m |T^k| w^k
    Vec positions;
};

UnevennessReport unevenness(const Partition& partition, const StepSchedule& sched, std::size_t m);

struct BruteForceResult {
    bool feasible = false;
    double z_star = -std::numeric_limits<double>::infinity();
    std::vector<LocalDecision> decisions;  // one per step, empty when infeasible
    std::size_t leaves = 0;                // complete combinations checked
};

inline constexpr std::size_t kBruteForceLimit = 20'000'000;

/// Exact offline optimum: the best total reward over all decision
/// combinations whose summed impact lies in T·Psi. Throws ConfigError when the
/// product of decision counts exceeds `limit`. Both execution modes return the
/// lexicographically first optimal combination.
BruteForceResult offline_bruteforce(std::span<const LocalStep> steps, const GoalSpec& goal,
                                    std::size_t limit = kBruteForceLimit, Exec exec = Exec::Parallel);

/// Least-squares slope of log(value) against log(t) over t in [t_lo, t_hi].
/// Returns -infinity when a value in the window is not positive.
double loglog_slope(std::span<const std::size_t> t, std::span<const double> values, std::size_t t_lo,
                    std::size_t t_hi);

/// Slope of goalvio_avg over [T/10, T].
double goalvio_slope(const MetricSeries& s);

struct Example2Gap {
    double ratio_accept_all = 0.0;          // scenario A: Reward / z*
    double ratio_reject_then_accept = 0.0;  // scenario B
    double reward_a = 0.0;
    double reward_b = 0.0;
};

/// Runs the default schedule on both two-phase instances.
Example2Gap example2_gap(std::size_t T);

}  // namespace odmp
