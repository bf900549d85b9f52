#pragma once

// Independent reference solvers used only by tests: slow, direct and written
// without the library's fast paths.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <vector>

#include "odmp/goalset.hpp"
#include "odmp/oracles.hpp"

namespace ref {

using odmp::Vec;

/// Minimum-cost transportation between supply a (rows) and demand b
/// (columns) by enumerating every basis. Bases of a transportation problem are
/// spanning trees of the complete bipartite graph; the flow on a tree is fixed
/// by peeling leaves, so each basic solution is read off directly.
inline double transport_lp(const Vec& a, const Vec& b, const std::vector<Vec>& cost) {
    const std::size_t R = a.size(), C = b.size(), V = R + C, need = V - 1;
    std::vector<std::pair<std::size_t, std::size_t>> edges;
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) edges.emplace_back(i, R + j);

    double best = std::numeric_limits<double>::infinity();
    std::vector<std::size_t> chosen;
    std::vector<std::size_t> parent(V);

    auto find = [&](std::vector<std::size_t>& par, std::size_t x) {
        while (par[x] != x) x = par[x] = par[par[x]];
        return x;
    };

    auto evaluate_tree = [&]() {
        Vec supply(V);
        for (std::size_t i = 0; i < R; ++i) supply[i] = a[i];
        for (std::size_t j = 0; j < C; ++j) supply[R + j] = -b[j];
        std::vector<std::vector<std::size_t>> adj(V);
        for (std::size_t e : chosen) {
            adj[edges[e].first].push_back(e);
            adj[edges[e].second].push_back(e);
        }
        std::vector<std::size_t> degree(V);
        for (std::size_t v = 0; v < V; ++v) degree[v] = adj[v].size();
        std::vector<char> used(edges.size(), 0);
        double total = 0.0;
        std::size_t peeled = 0;
        while (peeled < need) {
            bool progress = false;
            for (std::size_t v = 0; v < V && peeled < need; ++v) {
                if (degree[v] != 1) continue;
                std::size_t e = 0;
                for (std::size_t cand : adj[v])
                    if (!used[cand]) e = cand;
                const auto [row, col] = edges[e];
                // Flow row -> col equals the leftover supply of the leaf.
                const double flow = v == row ? supply[row] : -supply[col];
                if (flow < -1e-12) return;
                supply[row] -= flow;
                supply[col] += flow;
                total += flow * cost[row][col - R];
                used[e] = 1;
                --degree[row];
                --degree[col];
                ++peeled;
                progress = true;
            }
            if (!progress) return;
        }
        best = std::min(best, total);
    };

    std::function<void(std::size_t)> rec = [&](std::size_t start) {
        if (chosen.size() == need) {
            evaluate_tree();
            return;
        }
        for (std::size_t e = start; e + (need - chosen.size()) <= edges.size(); ++e) {
            std::iota(parent.begin(), parent.end(), std::size_t{0});
            for (std::size_t c : chosen) parent[find(parent, edges[c].first)] = find(parent, edges[c].second);
            if (find(parent, edges[e].first) == find(parent, edges[e].second)) continue;
            chosen.push_back(e);
            rec(e + 1);
            chosen.pop_back();
        }
    };
    rec(0);
    return best;
}

/// min over l of sum_i dist(y_i, [l, l + rho])^2 by a dense grid followed by
/// golden-section refinement around the best grid point.
inline double gap_distance_search(const Vec& y, double rho, bool nonneg) {
    auto f = [&](double l) {
        double s = 0.0;
        for (double v : y) {
            const double d = v < l ? l - v : (v > l + rho ? v - l - rho : 0.0);
            s += d * d;
        }
        return s;
    };
    const double lo0 = nonneg ? 0.0 : *std::min_element(y.begin(), y.end()) - rho - 1.0;
    const double hi0 = std::max(lo0, *std::max_element(y.begin(), y.end())) + 1.0;
    const int N = 20000;
    double best_l = lo0, best = f(lo0);
    for (int k = 1; k <= N; ++k) {
        const double l = lo0 + (hi0 - lo0) * k / N;
        if (f(l) < best) {
            best = f(l);
            best_l = l;
        }
    }
    const double step = (hi0 - lo0) / N;
    double a = std::max(lo0, best_l - step), b = std::min(hi0, best_l + step);
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int it = 0; it < 200; ++it) {
        const double c = b - g * (b - a), d = a + g * (b - a);
        if (f(c) <= f(d))
            b = d;
        else
            a = c;
    }
    return std::sqrt(std::min(best, f(0.5 * (a + b))));
}

/// Best objective over every assignment of tasks to agents.
inline double assignment_exhaustive(const odmp::AssignmentStep& s, const Vec& p) {
    double best = -std::numeric_limits<double>::infinity();
    std::vector<std::size_t> agent(s.n, 0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t j, double acc) {
        if (j == s.n) {
            best = std::max(best, acc);
            return;
        }
        for (std::size_t i = 0; i < s.m; ++i) rec(j + 1, acc + s.q(i, j) - p[i] * s.w(i, j));
    };
    rec(0, 0.0);
    return best;
}

/// Best MNL objective over all assortments of size <= cap.
inline double assortment_exhaustive(const odmp::AssortmentStep& s, const Vec& p) {
    const std::size_t m = s.m();
    double best = 0.0;
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
        if (std::size_t(__builtin_popcountll(mask)) > s.cap) continue;
        double num = 0.0, den = 1.0, price = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            if (mask >> i & 1u) {
                num += s.revenue[i] * s.pref[i];
                den += s.pref[i];
                price += p[i];
            }
        best = std::max(best, num / den - price);
    }
    return best;
}

/// Offline optimum by plain recursion over every decision combination.
inline double offline_recursive(const std::vector<odmp::LocalStep>& steps, const odmp::GoalSpec& goal) {
    std::vector<std::vector<odmp::LocalDecision>> opts;
    for (const auto& s : steps) opts.push_back(odmp::enumerate_decisions(s));
    const std::size_t m = goal.dim(), T = steps.size();
    double best = -std::numeric_limits<double>::infinity();
    Vec cum(m, 0.0);
    std::function<void(std::size_t, double)> rec = [&](std::size_t t, double r) {
        if (t == T) {
            Vec avg(m);
            for (std::size_t i = 0; i < m; ++i) avg[i] = cum[i] / double(T);
            if (odmp::distance_to_goal(goal, avg) <= 1e-9) best = std::max(best, r);
            return;
        }
        for (const auto& d : opts[t]) {
            for (std::size_t i = 0; i < m; ++i) cum[i] += d.y[i];
            rec(t + 1, r + d.r);
            for (std::size_t i = 0; i < m; ++i) cum[i] -= d.y[i];
        }
    };
    rec(0, 0.0);
    return best;
}

}  // namespace ref
