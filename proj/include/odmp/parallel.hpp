#pragma once

// Data-parallel kernels. Each kernel has a serial reference path selected by
// Exec::Serial; the OpenMP path writes per-item results into slots and
// reduces them in index order, so both paths return bitwise-identical values.

#include <cstddef>
#include <functional>
#include <span>

#include "odmp/goalset.hpp"
#include "odmp/oracles.hpp"

namespace odmp {

enum class Exec { Serial, Parallel };

/// Number of OpenMP threads used by Exec::Parallel (0 = runtime default).
void set_worker_count(int workers);
int worker_count();

/// Calls fn(i) for i in [0, n). With Exec::Parallel iterations run on the
/// OpenMP team with dynamic scheduling; fn must not share mutable state.
void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, Exec exec = Exec::Parallel);

struct DualPoint {
    double value = 0.0;
    Vec subgradient;  // T v̂ - Σ_t ŷ_t
};

/// Offline dual value and a subgradient at p (p must lie in C°).
DualPoint evaluate_dual(std::span<const LocalStep> steps, const GoalSpec& goal, ConstVecView p,
                        Exec exec = Exec::Parallel);

}  // namespace odmp
