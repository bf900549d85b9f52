#include "odmp/parallel.hpp"

#include <omp.h>

#include <exception>

namespace odmp {

namespace {
int g_workers = 0;
}

void set_worker_count(int workers) { g_workers = workers > 0 ? workers : 0; }

int worker_count() { return g_workers > 0 ? g_workers : omp_get_max_threads(); }

void for_each_index(std::size_t n, const std::function<void(std::size_t)>& fn, Exec exec) {
    if (exec == Exec::Serial || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
    for (long long i = 0; i < count; ++i) {
        try {
            fn(static_cast<std::size_t>(i));
        } catch (...) {
#pragma omp critical(odmp_for_each_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
}

DualPoint evaluate_dual(std::span<const LocalStep> steps, const GoalSpec& goal, ConstVecView p, Exec exec) {
    const std::size_t m = goal.dim();
    const Vec v_hat = support_point(goal, p);
    const double h = dot(p, v_hat);

    std::vector<LocalDecision> dec(steps.size());
    for_each_index(steps.size(), [&](std::size_t t) { dec[t] = solve(steps[t], p); }, exec);

    DualPoint out;
    out.subgradient.assign(m, 0.0);
    for (std::size_t t = 0; t < steps.size(); ++t) {
        out.value += h + (dec[t].r - dot(p, dec[t].y));
        for (std::size_t i = 0; i < m; ++i) out.subgradient[i] += v_hat[i] - dec[t].y[i];
    }
    return out;
}

}  // namespace odmp
