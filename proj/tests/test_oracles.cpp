#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "odmp/errors.hpp"
#include "odmp/oracles.hpp"
#include "reference.hpp"

using namespace odmp;

namespace {

void check_consistent(const LocalStep& step, const LocalDecision& d) {
    CHECK(is_feasible(step, d.x));
    const LocalDecision again = evaluate(step, d.x);
    CHECK(again.r == doctest::Approx(d.r).epsilon(1e-12));
    REQUIRE(again.y.size() == d.y.size());
    for (std::size_t i = 0; i < d.y.size(); ++i) CHECK(again.y[i] == doctest::Approx(d.y[i]).epsilon(1e-12));
}

}  // namespace

TEST_CASE("knapsack examples") {
    KnapsackStep s;
    s.m = 1;
    s.weights = {2.0, 3.0, 4.0};
    s.capacity = 5.0;
    s.utility = {3.0, 4.0, 5.0};
    const LocalDecision d = knapsack_solve(s, Vec{0.0});
    CHECK(d.x == Vec{1.0, 1.0, 0.0});
    CHECK(d.r == doctest::Approx(7.0));
    CHECK(knapsack_solve_exhaustive(s, Vec{0.0}).x == Vec{1.0, 1.0, 0.0});

    // Every adjusted profit is zero at p = 1: nothing is taken.
    const LocalDecision z = knapsack_solve(s, Vec{1.0});
    CHECK(z.x == Vec{0.0, 0.0, 0.0});
    CHECK(oracle_value(LocalStep{s}, Vec{1.0}) == 0.0);
}

TEST_CASE("knapsack at zero price maximizes total utility") {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const KnapsackStep s = fx::random_knapsack(rng, 1 + rng.below(12), 1 + rng.below(3));
        CHECK(knapsack_solve(s, Vec(s.m, 0.0)).r == doctest::Approx(knapsack_solve_exhaustive(s, Vec(s.m, 0.0)).r));
    }
}

TEST_CASE("branch and bound matches exhaustive enumeration") {
    Rng rng(22);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 1 + rng.below(4);
        const KnapsackStep s = fx::random_knapsack(rng, 1 + rng.below(15), m);
        const Vec p = fx::uniform_vec(rng, m, -0.5, 1.5);
        const LocalDecision a = knapsack_solve(s, p);
        const LocalDecision b = knapsack_solve_exhaustive(s, p);
        CHECK(std::abs((a.r - dot(p, a.y)) - (b.r - dot(p, b.y))) <= 1e-9);
        check_consistent(LocalStep{s}, a);
        // Items with nonpositive adjusted profit are never chosen.
        for (std::size_t j = 0; j < s.n(); ++j) {
            double c = s.item_profit(j);
            for (std::size_t i = 0; i < m; ++i) c -= p[i] * s.u(i, j);
            if (c <= 0.0) CHECK(a.x[j] == 0.0);
        }
    }
}

TEST_CASE("assortment examples") {
    const AssortmentStep s{{1.0, 2.0}, {1.0, 1.0}, 1, 0};
    const LocalDecision d = assortment_solve(s, Vec{0.0, 0.0});
    CHECK(d.x == Vec{0.0, 1.0});
    CHECK(d.r == doctest::Approx(1.0));
    CHECK(d.y == d.x);
    CHECK(oracle_value(LocalStep{s}, Vec{0.0, 0.0}) == doctest::Approx(1.0));

    const LocalDecision e = assortment_solve(s, Vec{0.0, 0.8});
    CHECK(e.x == Vec{1.0, 0.0});
    CHECK(e.r - dot(Vec{0.0, 0.8}, e.y) == doctest::Approx(0.5));
}

TEST_CASE("assortment pruning is exact") {
    Rng rng(23);
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t m = 1 + rng.below(12);
        const AssortmentStep s = fx::random_assortment(rng, m, 1 + rng.below(std::min<std::size_t>(4, m)));
        const Vec p = fx::uniform_vec(rng, m, -0.5, 3.0);
        const LocalDecision a = assortment_solve(s, p);
        const LocalDecision b = assortment_solve_unpruned(s, p);
        CHECK(std::abs((a.r - dot(p, a.y)) - (b.r - dot(p, b.y))) <= 1e-9);
        CHECK(a.x == b.x);
        check_consistent(LocalStep{s}, a);
        if (m <= 10) CHECK(std::abs((a.r - dot(p, a.y)) - ref::assortment_exhaustive(s, p)) <= 1e-9);
    }
}

TEST_CASE("assortment with nonnegative prices never scores below zero") {
    Rng rng(24);
    for (int trial = 0; trial < 200; ++trial) {
        const AssortmentStep s = fx::random_assortment(rng, 6, 3);
        CHECK(oracle_value(LocalStep{s}, fx::uniform_vec(rng, 6, 0.0, 10.0)) >= 0.0);
    }
}

TEST_CASE("assortment beyond the exact-mode limit is a configuration error") {
    Rng rng(25);
    const AssortmentStep s = fx::random_assortment(rng, kAssortmentExactLimit + 1, 3);
    CHECK_THROWS_AS(assortment_solve(s, Vec(s.m(), 0.0)), ConfigError);
}

TEST_CASE("assignment examples") {
    const AssignmentStep s{2, 1, {5.0, 4.0}, {10.0, 1.0}};
    const LocalDecision d = assignment_solve(s, Vec{1.0, 0.0});
    CHECK(d.x == Vec{0.0, 1.0});
    CHECK(d.r == doctest::Approx(4.0));
    CHECK(d.y == Vec{0.0, 1.0});

    Rng rng(26);
    const AssignmentStep r = fx::random_assignment(rng, 3, 4);
    double expect = 0.0;
    for (std::size_t j = 0; j < r.n; ++j) expect += std::max({r.q(0, j), r.q(1, j), r.q(2, j)});
    CHECK(oracle_value(LocalStep{r}, Vec(3, 0.0)) == doctest::Approx(expect));
}

TEST_CASE("assignment ties go to the smallest agent") {
    const AssignmentStep s{3, 1, {2.0, 2.0, 2.0}, {1.0, 1.0, 1.0}};
    CHECK(assignment_solve(s, Vec(3, 0.0)).x == Vec{1.0, 0.0, 0.0});
}

TEST_CASE("assignment closed form matches exhaustive search") {
    Rng rng(27);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t m = 1 + rng.below(4), n = 1 + rng.below(4);
        const AssignmentStep s = fx::random_assignment(rng, m, n);
        const Vec p = fx::uniform_vec(rng, m, -1.0, 2.0);
        const LocalDecision d = assignment_solve(s, p);
        CHECK(std::abs((d.r - dot(p, d.y)) - ref::assignment_exhaustive(s, p)) <= 1e-9);
        check_consistent(LocalStep{s}, d);
    }
}

TEST_CASE("oracle value is convex in the price") {
    Rng rng(28);
    for (int trial = 0; trial < 500; ++trial) {
        LocalStep step;
        std::size_t m = 0;
        switch (trial % 3) {
            case 0:
                m = 1 + rng.below(3);
                step = fx::random_knapsack(rng, 1 + rng.below(10), m);
                break;
            case 1:
                m = 2 + rng.below(6);
                step = fx::random_assortment(rng, m, 1 + rng.below(2));
                break;
            default:
                m = 1 + rng.below(4);
                step = fx::random_assignment(rng, m, 1 + rng.below(4));
        }
        const Vec p1 = fx::uniform_vec(rng, m, -1.0, 2.0), p2 = fx::uniform_vec(rng, m, -1.0, 2.0);
        Vec mid(m);
        for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (p1[i] + p2[i]);
        CHECK(oracle_value(step, mid) <= 0.5 * (oracle_value(step, p1) + oracle_value(step, p2)) + 1e-9);
    }
}

TEST_CASE("enumerated decisions are feasible and contain the optimum") {
    Rng rng(29);
    for (int trial = 0; trial < 100; ++trial) {
        const KnapsackStep s = fx::random_knapsack(rng, 1 + rng.below(6), 2);
        const auto all = enumerate_decisions(LocalStep{s});
        const Vec p = fx::uniform_vec(rng, 2, 0.0, 1.0);
        double best = -INFINITY;
        for (const LocalDecision& d : all) {
            CHECK(is_feasible(LocalStep{s}, d.x));
            best = std::max(best, d.r - dot(p, d.y));
        }
        CHECK(best == doctest::Approx(oracle_value(LocalStep{s}, p)));
    }
}

TEST_CASE("malformed steps are rejected") {
    KnapsackStep bad;
    bad.m = 1;
    bad.weights = {0.0};
    bad.capacity = 1.0;
    bad.utility = {1.0};
    CHECK_THROWS_AS(validate(LocalStep{bad}), ConfigError);
    CHECK_THROWS_AS(validate(LocalStep{AssortmentStep{{1.0}, {1.0}, 2, 0}}), ConfigError);
    Rng rng(30);
    CHECK_THROWS_AS(knapsack_solve(fx::random_knapsack(rng, 3, 2), Vec{0.0}), ConfigError);
}
