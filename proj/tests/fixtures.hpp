#pragma once

// Random test data shared by the unit tests and the acceptance suite.

#include "odmp/goalset.hpp"
#include "odmp/oracles.hpp"
#include "odmp/rng.hpp"

namespace fx {

using odmp::Rng;
using odmp::Vec;

inline Vec uniform_vec(Rng& rng, std::size_t m, double lo, double hi) {
    Vec v(m);
    for (double& x : v) x = rng.uniform(lo, hi);
    return v;
}

/// One of the five goal shapes, dimension 1..max_m.
inline odmp::GoalSpec random_goal(Rng& rng, std::size_t max_m = 5) {
    const std::size_t m = 1 + rng.below(max_m);
    switch (rng.below(5)) {
        case 0: {
            Vec lo = uniform_vec(rng, m, -2.0, 1.0), hi(m);
            for (std::size_t i = 0; i < m; ++i) hi[i] = lo[i] + rng.uniform(0.1, 3.0);
            return odmp::GoalSpec::box(lo, hi);
        }
        case 1:
            return odmp::GoalSpec::max_min_gap(m, rng.uniform(0.1, 5.0), true);
        case 2:
            return odmp::GoalSpec::max_min_gap(m, rng.uniform(0.1, 5.0), false);
        case 3: {
            const auto inner = odmp::GoalSpec::max_min_gap(m, rng.uniform(0.5, 5.0), rng.below(2) == 0);
            return odmp::GoalSpec::boxed(inner, Vec(m, rng.uniform(-3.0, 0.0)), Vec(m, rng.uniform(1.0, 8.0)));
        }
        default: {
            Vec lo(m, 0.0), hi(m, 1.0);
            return odmp::GoalSpec::boxed(odmp::GoalSpec::box(lo, hi), Vec(m, rng.uniform(-1.0, 0.5)),
                                         Vec(m, rng.uniform(0.6, 2.0)));
        }
    }
}

/// A point of the polar cone of the goal's recession cone.
inline Vec random_polar_point(Rng& rng, const odmp::GoalSpec& goal, double scale = 3.0) {
    return odmp::project_polar(goal, uniform_vec(rng, goal.dim(), -scale, scale));
}

/// A point of the recession cone itself.
inline Vec random_cone_point(Rng& rng, const odmp::GoalSpec& goal) {
    const std::size_t m = goal.dim();
    switch (goal.cone()) {
        case odmp::ConeKind::Zero:
            return Vec(m, 0.0);
        case odmp::ConeKind::Line:
            return Vec(m, rng.uniform(-10.0, 10.0));
        case odmp::ConeKind::NonnegRay:
            return Vec(m, rng.uniform(0.0, 10.0));
    }
    return Vec(m, 0.0);
}

/// A uniformly random point of the compact part Q (boxes only; boxed goals
/// are sampled by rejection inside their outer box).
inline Vec random_q_point(Rng& rng, const odmp::GoalSpec& goal) {
    const std::size_t m = goal.dim();
    if (const auto* b = std::get_if<odmp::BoxGoal>(&goal.variant())) {
        Vec v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = rng.uniform(b->lower[i], b->upper[i]);
        return v;
    }
    if (const auto* g = std::get_if<odmp::MaxMinGapGoal>(&goal.variant())) return uniform_vec(rng, m, 0.0, g->rho);
    const auto& bx = std::get<odmp::BoxedGoal>(goal.variant());
    for (int tries = 0; tries < 100000; ++tries) {
        Vec v(m);
        for (std::size_t i = 0; i < m; ++i) v[i] = rng.uniform(bx.y_lower[i], bx.y_upper[i]);
        if (odmp::contains(goal, v, 0.0)) return v;
    }
    return odmp::support_point(goal, Vec(m, 0.0));
}

inline odmp::KnapsackStep random_knapsack(Rng& rng, std::size_t n, std::size_t m) {
    odmp::KnapsackStep s;
    s.m = m;
    s.weights = uniform_vec(rng, n, 1.0, 10.0);
    double tot = 0.0;
    for (double w : s.weights) tot += w;
    s.capacity = rng.uniform(0.2, 0.7) * tot;
    s.utility = uniform_vec(rng, m * n, 0.0, 5.0);
    return s;
}

inline odmp::AssortmentStep random_assortment(Rng& rng, std::size_t m, std::size_t cap) {
    return odmp::AssortmentStep{uniform_vec(rng, m, 1.0, 10.0), uniform_vec(rng, m, 0.05, 2.0), cap, 0};
}

inline odmp::AssignmentStep random_assignment(Rng& rng, std::size_t m, std::size_t n) {
    return odmp::AssignmentStep{m, n, uniform_vec(rng, m * n, 0.0, 10.0), uniform_vec(rng, m * n, 0.0, 10.0)};
}

}  // namespace fx
