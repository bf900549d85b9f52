#include "odmp/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "odmp/errors.hpp"

namespace odmp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_price(std::size_t m, ConstVecView p) {
    if (p.size() != m)
        throw ConfigError("price vector has length " + std::to_string(p.size()) + ", expected " + std::to_string(m));
}

// Price-adjusted item values profit_j - p·U_{:,j}.
Vec adjusted_profits(const KnapsackStep& s, ConstVecView p) {
    const std::size_t n = s.n();
    Vec c(n);
    for (std::size_t j = 0; j < n; ++j) {
        double v = s.item_profit(j);
        for (std::size_t i = 0; i < s.m; ++i) v -= p[i] * s.u(i, j);
        c[j] = v;
    }
    return c;
}

LocalDecision knapsack_decision(const KnapsackStep& s, Vec x) {
    LocalDecision d;
    d.y.assign(s.m, 0.0);
    for (std::size_t j = 0; j < s.n(); ++j) {
        if (x[j] == 0.0) continue;
        d.r += s.item_profit(j);
        for (std::size_t i = 0; i < s.m; ++i) d.y[i] += s.u(i, j);
    }
    d.x = std::move(x);
    return d;
}

// Depth-first branch and bound over items sorted by value density. The bound
// at each node is the fractional (Dantzig) relaxation of the remaining items.
class KnapsackBnB {
public:
    KnapsackBnB(const Vec& value, const Vec& weight, double capacity) : capacity_(capacity) {
        for (std::size_t j = 0; j < value.size(); ++j)
            if (value[j] > 0.0 && weight[j] <= capacity) order_.push_back(j);
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return value[a] * weight[b] > value[b] * weight[a];
        });
        for (std::size_t j : order_) {
            v_.push_back(value[j]);
            w_.push_back(weight[j]);
        }
        take_.assign(order_.size(), 0);
        best_take_ = take_;
    }

    std::vector<std::size_t> solve() {
        dfs(0, 0.0, 0.0);
        std::vector<std::size_t> chosen;
        for (std::size_t k = 0; k < order_.size(); ++k)
            if (best_take_[k]) chosen.push_back(order_[k]);
        return chosen;
    }

private:
    double bound(std::size_t k, double value, double room) const {
        for (; k < v_.size(); ++k) {
            if (w_[k] <= room) {
                room -= w_[k];
                value += v_[k];
            } else {
                return value + v_[k] * (room / w_[k]);
            }
        }
        return value;
    }

    void dfs(std::size_t k, double value, double used) {
        if (value > best_) {
            best_ = value;
            best_take_ = take_;
        }
        if (k == v_.size()) return;
        if (bound(k, value, capacity_ - used) <= best_) return;
        if (used + w_[k] <= capacity_) {
            take_[k] = 1;
            dfs(k + 1, value + v_[k], used + w_[k]);
            take_[k] = 0;
        }
        dfs(k + 1, value, used);
    }

    double capacity_;
    std::vector<std::size_t> order_;
    Vec v_, w_;
    std::vector<char> take_, best_take_;
    double best_ = 0.0;
};

struct MnlTotals {
    double num = 0.0;  // Σ revenue_i pref_i
    double den = 1.0;  // 1 + Σ pref_i
    double price = 0.0;

    double objective() const { return num / den - price; }
};

// Enumerates assortments of size <= cap in lexicographic order of the 0/1
// vector (exclude before include), keeping the first strict improvement.
class AssortmentSearch {
public:
    AssortmentSearch(const AssortmentStep& s, ConstVecView p, bool prune) : s_(s), p_(p), prune_(prune) {
        x_.assign(s.m(), 0.0);
        best_x_ = x_;
    }

    Vec solve() {
        dfs(0, 0, MnlTotals{});
        return best_x_;
    }

private:
    double bound(std::size_t k, std::size_t size, const MnlTotals& t) const {
        double b = t.num / t.den - t.price;
        scratch_.clear();
        for (std::size_t i = k; i < s_.m(); ++i) {
            const double gain = s_.revenue[i] * s_.pref[i] / (t.den + s_.pref[i]) - p_[i];
            if (gain > 0.0) scratch_.push_back(gain);
        }
        const std::size_t room = s_.cap - size;
        if (scratch_.size() > room) {
            std::nth_element(scratch_.begin(), scratch_.begin() + static_cast<std::ptrdiff_t>(room), scratch_.end(),
                             std::greater<>());
            scratch_.resize(room);
        }
        for (double g : scratch_) b += g;
        return b;
    }

    void dfs(std::size_t k, std::size_t size, const MnlTotals& t) {
        if (k == s_.m() || size == s_.cap) {
            const double v = t.objective();
            if (v > best_) {
                best_ = v;
                best_x_ = x_;
            }
            return;
        }
        if (prune_ && bound(k, size, t) <= best_) return;
        dfs(k + 1, size, t);
        MnlTotals with = t;
        with.num += s_.revenue[k] * s_.pref[k];
        with.den += s_.pref[k];
        with.price += p_[k];
        x_[k] = 1.0;
        dfs(k + 1, size + 1, with);
        x_[k] = 0.0;
    }

    const AssortmentStep& s_;
    ConstVecView p_;
    bool prune_;
    Vec x_, best_x_;
    double best_ = -std::numeric_limits<double>::infinity();
    mutable Vec scratch_;
};

LocalDecision assortment_decision(const AssortmentStep& s, Vec x) {
    LocalDecision d;
    double num = 0.0, den = 1.0;
    for (std::size_t i = 0; i < s.m(); ++i) {
        if (x[i] == 0.0) continue;
        num += s.revenue[i] * s.pref[i];
        den += s.pref[i];
    }
    d.r = num / den;
    d.y = x;
    d.x = std::move(x);
    return d;
}

LocalDecision assignment_decision(const AssignmentStep& s, const std::vector<std::size_t>& agent_of) {
    LocalDecision d;
    d.x.assign(s.m * s.n, 0.0);
    d.y.assign(s.m, 0.0);
    for (std::size_t j = 0; j < s.n; ++j) {
        const std::size_t i = agent_of[j];
        d.x[i * s.n + j] = 1.0;
        d.r += s.q(i, j);
        d.y[i] += s.w(i, j);
    }
    return d;
}

void require_finite_nonneg(const Vec& v, const char* what) {
    for (double x : v)
        if (!std::isfinite(x) || x < 0.0) throw ConfigError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

double KnapsackStep::item_profit(std::size_t j) const {
    if (!profit.empty()) return profit[j];
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += u(i, j);
    return s;
}

void validate(const LocalStep& step) {
    std::visit(Overloaded{
                   [](const KnapsackStep& s) {
                       if (s.m == 0) throw ConfigError("knapsack step: m must be >= 1");
                       if (s.utility.size() != s.m * s.n()) throw ConfigError("knapsack step: U has wrong size");
                       if (!s.profit.empty() && s.profit.size() != s.n())
                           throw ConfigError("knapsack step: profit has wrong size");
                       for (double w : s.weights)
                           if (!(w > 0.0) || !std::isfinite(w)) throw ConfigError("knapsack step: weights must be > 0");
                       if (!(s.capacity >= 0.0) || !std::isfinite(s.capacity))
                           throw ConfigError("knapsack step: capacity must be >= 0");
                       require_finite_nonneg(s.utility, "knapsack step: U");
                       for (double o : s.profit)
                           if (!std::isfinite(o)) throw ConfigError("knapsack step: profit must be finite");
                   },
                   [](const AssortmentStep& s) {
                       if (s.m() == 0 || s.pref.size() != s.m())
                           throw ConfigError("assortment step: revenue/pref sizes differ or are empty");
                       for (std::size_t i = 0; i < s.m(); ++i)
                           if (!(s.revenue[i] > 0.0) || !(s.pref[i] > 0.0) || !std::isfinite(s.revenue[i]) ||
                               !std::isfinite(s.pref[i]))
                               throw ConfigError("assortment step: revenue and pref must be > 0");
                       if (s.cap < 1 || s.cap > s.m()) throw ConfigError("assortment step: need 1 <= s <= m");
                   },
                   [](const AssignmentStep& s) {
                       if (s.m == 0) throw ConfigError("assignment step: m must be >= 1");
                       if (s.profit.size() != s.m * s.n || s.workload.size() != s.m * s.n)
                           throw ConfigError("assignment step: matrix sizes differ from m*n");
                       require_finite_nonneg(s.profit, "assignment step: profits");
                       require_finite_nonneg(s.workload, "assignment step: workloads");
                   },
               },
               step);
}

std::size_t impact_dim(const LocalStep& step) {
    return std::visit(Overloaded{
                          [](const KnapsackStep& s) { return s.m; },
                          [](const AssortmentStep& s) { return s.m(); },
                          [](const AssignmentStep& s) { return s.m; },
                      },
                      step);
}

LocalDecision knapsack_solve(const KnapsackStep& step, ConstVecView p) {
    check_price(step.m, p);
    const Vec c = adjusted_profits(step, p);
    KnapsackBnB bnb(c, step.weights, step.capacity);
    Vec x(step.n(), 0.0);
    for (std::size_t j : bnb.solve()) x[j] = 1.0;
    return knapsack_decision(step, std::move(x));
}

LocalDecision knapsack_solve_exhaustive(const KnapsackStep& step, ConstVecView p) {
    check_price(step.m, p);
    const std::size_t n = step.n();
    if (n > 20) throw ConfigError("exhaustive knapsack limited to n <= 20");
    const Vec c = adjusted_profits(step, p);
    double best = -std::numeric_limits<double>::infinity();
    std::uint64_t best_mask = 0;
    // Item 0 is the most significant bit, so increasing masks are increasing
    // in lexicographic order of x.
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        double weight = 0.0, value = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (mask >> (n - 1 - j) & 1u) {
                weight += step.weights[j];
                value += c[j];
            }
        }
        if (weight <= step.capacity && value > best) {
            best = value;
            best_mask = mask;
        }
    }
    Vec x(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) x[j] = (best_mask >> (n - 1 - j) & 1u) ? 1.0 : 0.0;
    return knapsack_decision(step, std::move(x));
}

LocalDecision assortment_solve(const AssortmentStep& step, ConstVecView p) {
    check_price(step.m(), p);
    if (step.m() > kAssortmentExactLimit)
        throw ConfigError("assortment step: m = " + std::to_string(step.m()) + " exceeds the exact-mode limit of " +
                          std::to_string(kAssortmentExactLimit));
    return assortment_decision(step, AssortmentSearch(step, p, true).solve());
}

LocalDecision assortment_solve_unpruned(const AssortmentStep& step, ConstVecView p) {
    check_price(step.m(), p);
    return assortment_decision(step, AssortmentSearch(step, p, false).solve());
}

LocalDecision assignment_solve(const AssignmentStep& step, ConstVecView p) {
    check_price(step.m, p);
    std::vector<std::size_t> agent_of(step.n, 0);
    for (std::size_t j = 0; j < step.n; ++j) {
        double best = step.q(0, j) - p[0] * step.w(0, j);
        for (std::size_t i = 1; i < step.m; ++i) {
            const double v = step.q(i, j) - p[i] * step.w(i, j);
            if (v > best) {
                best = v;
                agent_of[j] = i;
            }
        }
    }
    return assignment_decision(step, agent_of);
}

LocalDecision solve(const LocalStep& step, ConstVecView p) {
    return std::visit(Overloaded{
                          [&](const KnapsackStep& s) { return knapsack_solve(s, p); },
                          [&](const AssortmentStep& s) { return assortment_solve(s, p); },
                          [&](const AssignmentStep& s) { return assignment_solve(s, p); },
                      },
                      step);
}

double oracle_value(const LocalStep& step, ConstVecView p) {
    const LocalDecision d = solve(step, p);
    return d.r - dot(p, d.y);
}

LocalDecision evaluate(const LocalStep& step, const Vec& x) {
    return std::visit(Overloaded{
                          [&](const KnapsackStep& s) { return knapsack_decision(s, x); },
                          [&](const AssortmentStep& s) { return assortment_decision(s, x); },
                          [&](const AssignmentStep& s) {
                              std::vector<std::size_t> agent_of(s.n, 0);
                              for (std::size_t j = 0; j < s.n; ++j)
                                  for (std::size_t i = 0; i < s.m; ++i)
                                      if (x[i * s.n + j] != 0.0) agent_of[j] = i;
                              return assignment_decision(s, agent_of);
                          },
                      },
                      step);
}

bool is_feasible(const LocalStep& step, const Vec& x, double tol) {
    for (double v : x)
        if (v != 0.0 && v != 1.0) return false;
    return std::visit(Overloaded{
                          [&](const KnapsackStep& s) {
                              if (x.size() != s.n()) return false;
                              return dot(x, s.weights) <= s.capacity + tol;
                          },
                          [&](const AssortmentStep& s) { return x.size() == s.m() && sum(x) <= double(s.cap); },
                          [&](const AssignmentStep& s) {
                              if (x.size() != s.m * s.n) return false;
                              for (std::size_t j = 0; j < s.n; ++j) {
                                  double c = 0.0;
                                  for (std::size_t i = 0; i < s.m; ++i) c += x[i * s.n + j];
                                  if (c != 1.0) return false;
                              }
                              return true;
                          },
                      },
                      step);
}

std::vector<LocalDecision> enumerate_decisions(const LocalStep& step, std::size_t limit) {
    std::vector<LocalDecision> out;
    auto too_many = [&](double count) {
        if (count > double(limit))
            throw ConfigError("decision enumeration would produce " + std::to_string(count) + " elements");
    };
    std::visit(Overloaded{
                   [&](const KnapsackStep& s) {
                       const std::size_t n = s.n();
                       too_many(std::ldexp(1.0, int(n)));
                       for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
                           Vec x(n, 0.0);
                           for (std::size_t j = 0; j < n; ++j) x[j] = (mask >> (n - 1 - j) & 1u) ? 1.0 : 0.0;
                           if (dot(x, s.weights) <= s.capacity) out.push_back(knapsack_decision(s, std::move(x)));
                       }
                   },
                   [&](const AssortmentStep& s) {
                       const std::size_t m = s.m();
                       too_many(std::ldexp(1.0, int(m)));
                       for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
                           if (std::size_t(__builtin_popcountll(mask)) > s.cap) continue;
                           Vec x(m, 0.0);
                           for (std::size_t i = 0; i < m; ++i) x[i] = (mask >> (m - 1 - i) & 1u) ? 1.0 : 0.0;
                           out.push_back(assortment_decision(s, std::move(x)));
                       }
                   },
                   [&](const AssignmentStep& s) {
                       too_many(std::pow(double(s.m), double(s.n)));
                       std::vector<std::size_t> agent_of(s.n, 0);
                       while (true) {
                           out.push_back(assignment_decision(s, agent_of));
                           std::size_t j = s.n;
                           while (j > 0) {
                               --j;
                               if (++agent_of[j] < s.m) break;
                               agent_of[j] = 0;
                               if (j == 0) return;
                           }
                           if (s.n == 0) return;
                       }
                   },
               },
               step);
    return out;
}

double max_reward(const LocalStep& step) {
    const Vec zero(impact_dim(step), 0.0);
    return solve(step, zero).r;
}

}  // namespace odmp
