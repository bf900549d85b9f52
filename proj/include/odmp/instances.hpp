#pragma once

// Seeded generators for the experiment families.

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "odmp/dual_learner.hpp"
#include "odmp/input_models.hpp"

namespace odmp {

struct Instance {
    std::string family;  // "okpfot", "aovc", "assignment", "example2"
    std::vector<LocalStep> steps;
    GoalSpec goal;
    InstanceConstants constants;
    std::uint64_t seed = 0;
    nlohmann::json config = nlohmann::json::object();  // generator parameters
    nlohmann::json notes = nlohmann::json::object();   // generation metadata

    std::size_t horizon() const { return steps.size(); }
    std::size_t dim() const { return goal.dim(); }
};

/// Online knapsack with fairness over time. Defaults are the published
/// experiment sizes; desk runs shrink n, m and T.
struct OkpFotConfig {
    std::size_t n = 50;
    std::size_t m = 10;
    std::size_t T = 10000;
    double rho = 100.0;
    std::uint64_t seed = 1;

    void validate() const;
};

/// Assortment with visibility floors and a cardinality cap under a synthetic
/// mixed-MNL model.
struct AovcConfig {
    std::size_t m = 15;
    std::size_t K = 4;
    std::size_t s = 5;
    std::size_t T = 1500;
    double no_purchase_rate = 0.5;
    std::vector<double> type_weights;  // empty = uniform over types
    double floor_scale = 0.5;          // Σ f_i <= floor_scale * s
    std::uint64_t seed = 1;

    void validate() const;
};

struct AssignmentConfig {
    std::size_t m = 4;
    std::size_t tasks_min = 1;
    std::size_t tasks_max = 5;
    std::size_t T = 1000;
    double rho = 5.0;
    std::uint64_t seed = 1;

    void validate() const;
};

enum class Example2Scenario { A, B };

/// w ~ U(1,1000), W = 0.3 Σw, U_ij ~ U(w_j - 20i, w_j + 40i) (1-based i)
/// clamped at 0, Psi = {y >= 0 : max - min <= rho}, d_lower = rho/2.
Instance gen_okpfot(const OkpFotConfig& cfg);

/// Log-normal(0,1) preferences rescaled per type to the target no-purchase
/// rate, revenues ~ U(1,10), Psi = [f, 1]^m with Σ f <= floor_scale * s.
/// Steps are listed type by type in draw order; pick an arrival order with
/// the input models.
Instance gen_aovc_synthetic(const AovcConfig& cfg);

/// q, w ~ U(0,10), Psi = {max - min <= rho} with C = R·1, constants
/// d_y = w_max, d_r = q_max, d_lower = rho/2.
Instance gen_assignment(const AssignmentConfig& cfg);

/// Two-phase budget instance: phase-1 items weigh 2 and pay 1; phase-2 items
/// weigh 0 and pay 0 (scenario A) or weigh 2 and pay 2 (scenario B). The
/// average weight budget is 1.
Instance gen_example2(std::size_t T, Example2Scenario scenario);

/// Offline optimum of the two-phase instance (T/2 for A, T for B).
double example2_offline_optimum(std::size_t T, Example2Scenario scenario);

/// Groups of step indices sharing a customer type (assortment steps only).
Partition type_partition(const std::vector<LocalStep>& steps);

/// Probability that a customer buys nothing when shown a uniformly random
/// size-s assortment, estimated from `samples` draws.
double no_purchase_probability(const std::vector<double>& pref, std::size_t s, std::size_t samples,
                               std::uint64_t seed);

struct FairPoint {
    std::vector<double> lambda;  // mixture weights over "agent i takes every task"
    Vec y;                       // resulting workload vector, all entries equal
    double r = 0.0;
};

/// Convex combination of single-agent assignments with equal workloads.
FairPoint fair_fractional_point(const AssignmentStep& step);

}  // namespace odmp
