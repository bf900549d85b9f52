#pragma once

// Local feasible sets Omega^t exposed through the price-directed problem
//
//     max { r - p·y : (r, x, y) in Omega^t }
//
// for three families: 0-1 knapsack with linear stakeholder utilities,
// cardinality-constrained MNL assortment, and uncapacitated fair assignment.
// All solvers are exact.

#include <cstdint>
#include <variant>

#include "odmp/vec.hpp"

namespace odmp {

/// One local decision: reward r, family-specific decision x, impact y.
struct LocalDecision {
    double r = 0.0;
    Vec x;
    Vec y;
};

/// 0-1 knapsack step. Impact is U x (U is m×n, row-major). Reward is
/// profit·x, where an empty profit vector means the utilitarian profit 1ᵀU.
struct KnapsackStep {
    Vec weights;
    double capacity = 0.0;
    std::size_t m = 0;
    Vec utility;  // m*n, row-major: utility[i*n + j]
    Vec profit;   // optional, size n

    std::size_t n() const { return weights.size(); }
    double u(std::size_t i, std::size_t j) const { return utility[i * n() + j]; }
    /// Profit of item j (explicit or utilitarian).
    double item_profit(std::size_t j) const;
};

/// Assortment shown to one customer of type `type_id` under an MNL model.
/// Impact is the shown-indicator vector itself.
struct AssortmentStep {
    Vec revenue;
    Vec pref;
    std::size_t cap = 1;
    std::size_t type_id = 0;

    std::size_t m() const { return revenue.size(); }
};

/// Uncapacitated assignment of n tasks to m agents; each task goes to exactly
/// one agent. Matrices are m×n row-major.
struct AssignmentStep {
    std::size_t m = 0;
    std::size_t n = 0;
    Vec profit;
    Vec workload;

    double q(std::size_t i, std::size_t j) const { return profit[i * n + j]; }
    double w(std::size_t i, std::size_t j) const { return workload[i * n + j]; }
};

using LocalStep = std::variant<KnapsackStep, AssortmentStep, AssignmentStep>;

/// Largest assortment universe solved by enumeration.
inline constexpr std::size_t kAssortmentExactLimit = 25;

/// Throws ConfigError when the step violates its family's invariants.
void validate(const LocalStep& step);

/// Impact dimension m of a step.
std::size_t impact_dim(const LocalStep& step);

LocalDecision knapsack_solve(const KnapsackStep& step, ConstVecView p);
/// Plain enumeration of all 2^n subsets (n <= 20); lexicographically smallest
/// optimum. Reference for the branch-and-bound solver.
LocalDecision knapsack_solve_exhaustive(const KnapsackStep& step, ConstVecView p);

LocalDecision assortment_solve(const AssortmentStep& step, ConstVecView p);
/// Same enumeration order without the bound-based pruning.
LocalDecision assortment_solve_unpruned(const AssortmentStep& step, ConstVecView p);

LocalDecision assignment_solve(const AssignmentStep& step, ConstVecView p);

/// Dispatches to the family solver.
LocalDecision solve(const LocalStep& step, ConstVecView p);

/// r̂ - p·ŷ of the family's optimizer, i.e. -(f^t)*(p).
double oracle_value(const LocalStep& step, ConstVecView p);

/// Every element of a finite Omega^t (feasible decisions only). Throws
/// ConfigError if the count would exceed `limit`.
std::vector<LocalDecision> enumerate_decisions(const LocalStep& step, std::size_t limit = 1u << 20);

/// Recomputes (r, y) from x with the family's maps.
LocalDecision evaluate(const LocalStep& step, const Vec& x);

/// True if x satisfies the family's hard constraint.
bool is_feasible(const LocalStep& step, const Vec& x, double tol = 1e-9);

/// max { r : (r, x, y) in Omega^t }, the unpenalized optimum.
double max_reward(const LocalStep& step);

}  // namespace odmp
