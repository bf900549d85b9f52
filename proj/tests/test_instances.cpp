#include <cmath>
#include <numeric>

#include "doctest.h"
#include "odmp/errors.hpp"
#include "odmp/instance_io.hpp"
#include "odmp/instances.hpp"

using namespace odmp;

TEST_CASE("knapsack generator ranges") {
    OkpFotConfig c;
    c.n = 20;
    c.m = 5;
    c.T = 50;
    c.seed = 3;
    const Instance inst = gen_okpfot(c);
    REQUIRE(inst.horizon() == 50);
    CHECK(inst.dim() == 5);
    for (const LocalStep& step : inst.steps) {
        const auto& s = std::get<KnapsackStep>(step);
        CHECK(s.n() == 20);
        for (double w : s.weights) CHECK((w >= 1.0 && w <= 1000.0));
        CHECK(s.capacity == doctest::Approx(0.3 * std::accumulate(s.weights.begin(), s.weights.end(), 0.0)));
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 20; ++j) {
                const double u = s.u(i, j);
                CHECK(u >= 0.0);
                // 1-based agent index in the draw range.
                const double ii = double(i + 1);
                CHECK(u <= s.weights[j] + 40.0 * ii + 1e-9);
                if (u > 0.0) CHECK(u >= s.weights[j] - 20.0 * ii - 1e-9);
            }
    }
    CHECK(inst.constants.d_lower == doctest::Approx(50.0));
    CHECK_THROWS_AS(gen_okpfot(OkpFotConfig{.n = 0}), ConfigError);
    CHECK_THROWS_AS(gen_okpfot(OkpFotConfig{.rho = 0.0}), ConfigError);
}

TEST_CASE("generators are deterministic and extend by prefix") {
    OkpFotConfig c;
    c.n = 10;
    c.m = 3;
    c.T = 40;
    c.seed = 5;
    const Instance a = gen_okpfot(c), b = gen_okpfot(c);
    CHECK(instance_hash(a) == instance_hash(b));
    c.T = 80;
    const Instance longer = gen_okpfot(c);
    for (std::size_t t = 0; t < 40; ++t) {
        const auto& x = std::get<KnapsackStep>(a.steps[t]);
        const auto& y = std::get<KnapsackStep>(longer.steps[t]);
        CHECK(x.weights == y.weights);
        CHECK(x.utility == y.utility);
    }
    c.T = 40;
    c.seed = 6;
    CHECK(instance_hash(gen_okpfot(c)) != instance_hash(a));
}

TEST_CASE("every generated impact lies within d_y of Q") {
    OkpFotConfig k;
    k.n = 8;
    k.m = 3;
    k.T = 30;
    AssignmentConfig g;
    g.T = 30;
    AovcConfig a;
    a.T = 60;
    for (const Instance& inst : {gen_okpfot(k), gen_assignment(g), gen_aovc_synthetic(a)}) {
        for (const LocalStep& step : inst.steps) {
            for (const LocalDecision& d : enumerate_decisions(step)) {
                const double lim = inst.constants.d_y + 1e-9;
                CHECK(max_linf_to_q(inst.goal, d.y, d.y) <= lim);
                CHECK(std::abs(d.r) <= inst.constants.d_r + 1e-9);
            }
        }
    }
}

TEST_CASE("assortment generator") {
    AovcConfig c;
    c.T = 200;
    c.seed = 2;
    const Instance inst = gen_aovc_synthetic(c);
    REQUIRE(std::holds_alternative<BoxGoal>(inst.goal.variant()));
    const BoxGoal& box = std::get<BoxGoal>(inst.goal.variant());
    const Vec& floors = box.lower;
    CHECK(std::accumulate(floors.begin(), floors.end(), 0.0) <= 0.5 * double(c.s) + 1e-12);
    for (double f : floors) CHECK((f >= 0.0 && f < 1.0));
    for (double u : box.upper) CHECK(u == 1.0);
    for (const LocalStep& step : inst.steps) {
        const auto& s = std::get<AssortmentStep>(step);
        CHECK(s.cap == c.s);
        CHECK(s.type_id < c.K);
        for (double v : s.pref) CHECK(v > 0.0);
        for (double r : s.revenue) CHECK((r >= 1.0 && r <= 10.0));
    }
    CHECK(inst.constants.d_lower > 0.0);
    const Partition types = type_partition(inst.steps);
    CHECK(types.groups.size() <= c.K);
    CHECK_NOTHROW(types.validate(c.T));
    CHECK_THROWS_AS(gen_aovc_synthetic(AovcConfig{.floor_scale = 1.5}), ConfigError);
}

TEST_CASE("preference scaling hits the no-purchase target") {
    AovcConfig c;
    c.T = 40;
    c.seed = 9;
    const Instance inst = gen_aovc_synthetic(c);
    std::vector<bool> seen(c.K, false);
    for (const LocalStep& step : inst.steps) {
        const auto& s = std::get<AssortmentStep>(step);
        if (seen[s.type_id]) continue;
        seen[s.type_id] = true;
        CHECK(std::abs(no_purchase_probability(s.pref, c.s, 10000, 77) - c.no_purchase_rate) <= 0.05);
    }
}

TEST_CASE("assignment generator and fair point") {
    AssignmentConfig c;
    c.T = 100;
    c.seed = 4;
    const Instance inst = gen_assignment(c);
    CHECK(inst.goal.cone() == ConeKind::Line);
    CHECK(inst.constants.d_lower == doctest::Approx(2.5));
    for (const LocalStep& step : inst.steps) {
        const auto& s = std::get<AssignmentStep>(step);
        CHECK((s.n >= 1 && s.n <= 5));
        const FairPoint f = fair_fractional_point(s);
        CHECK(std::accumulate(f.lambda.begin(), f.lambda.end(), 0.0) == doctest::Approx(1.0));
        for (double l : f.lambda) CHECK(l >= 0.0);
        for (double y : f.y) CHECK(y == doctest::Approx(f.y[0]));
        CHECK(contains(inst.goal, f.y));
    }
}

TEST_CASE("fair point with an idle agent puts all tasks there") {
    const AssignmentStep s{2, 2, {1.0, 1.0, 2.0, 2.0}, {0.0, 0.0, 3.0, 1.0}};
    const FairPoint f = fair_fractional_point(s);
    CHECK(f.lambda == std::vector<double>{1.0, 0.0});
    CHECK(f.y == Vec{0.0, 0.0});
    CHECK(f.r == doctest::Approx(2.0));
}

TEST_CASE("two-phase instances") {
    const Instance a = gen_example2(10, Example2Scenario::A);
    const Instance b = gen_example2(10, Example2Scenario::B);
    for (std::size_t t = 0; t < 5; ++t) {
        const auto& s = std::get<KnapsackStep>(a.steps[t]);
        CHECK(s.weights == Vec{2.0});
        CHECK(s.profit == Vec{1.0});
        CHECK(instance_hash(a) != instance_hash(b));
    }
    CHECK(std::get<KnapsackStep>(a.steps[7]).profit == Vec{0.0});
    CHECK(std::get<KnapsackStep>(b.steps[7]).profit == Vec{2.0});
    CHECK(example2_offline_optimum(10, Example2Scenario::A) == 5.0);
    CHECK(example2_offline_optimum(10, Example2Scenario::B) == 10.0);
    CHECK_THROWS_AS(gen_example2(7, Example2Scenario::A), ConfigError);
}
