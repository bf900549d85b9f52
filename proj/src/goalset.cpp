#include "odmp/goalset.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "odmp/errors.hpp"

namespace odmp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_box(const Vec& lo, const Vec& hi, const char* what) {
    if (lo.size() != hi.size() || lo.empty())
        throw ConfigError(std::string(what) + ": bound vectors must be nonempty and of equal length");
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (std::isnan(lo[i]) || std::isnan(hi[i]))
            throw ConfigError(std::string(what) + ": NaN bound");
        if (lo[i] > hi[i])
            throw ConfigError(std::string(what) + ": lower > upper at coordinate " + std::to_string(i));
    }
}

// Psi of a max-min-gap shape written as the union over l in [l_lo, l_hi] of
// boxes prod_i [max(l, a_i), min(l + rho, b_i)]. Covers the plain gap goal
// (a = 0 or -inf, b = +inf) and its intersection with a box Y.
struct GapForm {
    Vec a;
    Vec b;
    double rho = 0.0;
    double l_lo = -kInf;
    double l_hi = kInf;

    double lo(std::size_t i, double l) const { return std::max(l, a[i]); }
    double hi(std::size_t i, double l) const { return std::min(l + rho, b[i]); }
};

GapForm gap_form(const MaxMinGapGoal& g) {
    GapForm f;
    f.a.assign(g.m, g.nonneg ? 0.0 : -kInf);
    f.b.assign(g.m, kInf);
    f.rho = g.rho;
    f.l_lo = g.nonneg ? -g.rho : -kInf;
    f.l_hi = kInf;
    return f;
}

GapForm gap_form(const MaxMinGapGoal& g, const Vec& ylo, const Vec& yhi) {
    GapForm f = gap_form(g);
    double amax = -kInf, bmin = kInf;
    for (std::size_t i = 0; i < g.m; ++i) {
        f.a[i] = std::max(f.a[i], ylo[i]);
        f.b[i] = yhi[i];
        amax = std::max(amax, f.a[i]);
        bmin = std::min(bmin, f.b[i]);
    }
    f.l_lo = amax - g.rho;
    f.l_hi = bmin;
    return f;
}

// Squared distance from y to the box attached to level l.
double gap_residual_sq(const GapForm& f, ConstVecView y, double l) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double lo = f.lo(i, l), hi = f.hi(i, l);
        double r = 0.0;
        if (y[i] < lo)
            r = lo - y[i];
        else if (y[i] > hi)
            r = y[i] - hi;
        s += r * r;
    }
    return s;
}

// Exact minimization of the convex piecewise quadratic l -> dist(y, box(l))^2.
// On each piece every residual is affine in l with slope in {-1, 0, 1}, so the
// piece minimizer has a closed form.
GoalProjection gap_project(const GapForm& f, ConstVecView y) {
    const std::size_t m = y.size();
    std::vector<double> pts;
    pts.reserve(4 * m + 2);
    auto add = [&](double v) {
        if (std::isfinite(v) && v >= f.l_lo && v <= f.l_hi) pts.push_back(v);
    };
    for (std::size_t i = 0; i < m; ++i) {
        add(y[i]);
        add(y[i] - f.rho);
        add(f.a[i]);
        add(f.b[i] - f.rho);
    }
    add(f.l_lo);
    add(f.l_hi);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    double best_l = pts.empty() ? 0.0 : pts.front();
    double best = gap_residual_sq(f, y, best_l);
    auto consider = [&](double l) {
        const double v = gap_residual_sq(f, y, l);
        if (v < best) {
            best = v;
            best_l = l;
        }
    };
    for (double l : pts) consider(l);

    // Piece minimizer given a representative interior point.
    auto piece = [&](double rep, double lo_end, double hi_end) {
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double lo = f.lo(i, rep), hi = f.hi(i, rep);
            if (y[i] < lo) {
                if (rep >= f.a[i]) {  // residual l - y_i
                    num += y[i];
                    den += 1.0;
                }
            } else if (y[i] > hi) {
                if (rep + f.rho <= f.b[i]) {  // residual y_i - rho - l
                    num += y[i] - f.rho;
                    den += 1.0;
                }
            }
        }
        if (den == 0.0) return;
        consider(std::clamp(num / den, lo_end, hi_end));
    };
    if (pts.empty()) {
        piece(0.0, f.l_lo, f.l_hi);
    } else {
        if (!std::isfinite(f.l_lo) || pts.front() > f.l_lo) piece(pts.front() - 1.0, f.l_lo, pts.front());
        for (std::size_t k = 0; k + 1 < pts.size(); ++k)
            piece(0.5 * (pts[k] + pts[k + 1]), pts[k], pts[k + 1]);
        if (!std::isfinite(f.l_hi) || pts.back() < f.l_hi) piece(pts.back() + 1.0, pts.back(), f.l_hi);
    }

    GoalProjection out;
    out.point.resize(m);
    for (std::size_t i = 0; i < m; ++i) out.point[i] = std::clamp(y[i], f.lo(i, best_l), f.hi(i, best_l));
    out.distance = dist2(y, out.point);
    return out;
}

// argmax of p·v over the gap form with finite level range. The objective is
// concave piecewise linear in the level l, so a breakpoint attains it.
Vec gap_support(const GapForm& f, ConstVecView p) {
    const std::size_t m = p.size();
    auto coord = [&](std::size_t i, double l) { return p[i] > 0.0 ? f.hi(i, l) : f.lo(i, l); };
    auto value = [&](double l) {
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += p[i] * coord(i, l);
        return s;
    };
    std::vector<double> pts{f.l_lo, f.l_hi};
    for (std::size_t i = 0; i < m; ++i) {
        for (double v : {f.a[i], f.b[i] - f.rho})
            if (std::isfinite(v) && v > f.l_lo && v < f.l_hi) pts.push_back(v);
    }
    std::sort(pts.begin(), pts.end());
    double best_l = pts.front();
    double best = value(best_l);
    for (double l : pts) {
        const double v = value(l);
        if (v > best) {
            best = v;
            best_l = l;
        }
    }
    Vec out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = coord(i, best_l);
    return out;
}

Vec box_support(const Vec& lo, const Vec& hi, ConstVecView p) {
    Vec v(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] > 0.0 ? hi[i] : lo[i];
    return v;
}

GoalProjection box_project(const Vec& lo, const Vec& hi, ConstVecView y) {
    GoalProjection out;
    out.point.resize(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out.point[i] = std::clamp(y[i], lo[i], hi[i]);
    out.distance = dist2(y, out.point);
    return out;
}

void intersect_boxes(const Vec& alo, const Vec& ahi, const Vec& blo, const Vec& bhi, Vec& lo, Vec& hi) {
    lo.resize(alo.size());
    hi.resize(alo.size());
    for (std::size_t i = 0; i < alo.size(); ++i) {
        lo[i] = std::max(alo[i], blo[i]);
        hi[i] = std::min(ahi[i], bhi[i]);
    }
}

void check_dim(const GoalSpec& g, std::size_t n) {
    if (g.dim() != n)
        throw ConfigError("goal dimension " + std::to_string(g.dim()) + " does not match vector length " +
                          std::to_string(n));
}

}  // namespace

GoalSpec::GoalSpec(Variant v) : v_(std::move(v)) {
    std::visit(Overloaded{
                   [](const BoxGoal& g) { check_box(g.lower, g.upper, "box goal"); },
                   [](const MaxMinGapGoal& g) {
                       if (g.m == 0) throw ConfigError("max-min-gap goal: dimension must be >= 1");
                       if (!(g.rho >= 0.0) || !std::isfinite(g.rho))
                           throw ConfigError("max-min-gap goal: rho must be finite and >= 0");
                   },
                   [](const BoxedGoal& g) {
                       if (!g.inner) throw ConfigError("boxed goal: missing inner goal");
                       if (std::holds_alternative<BoxedGoal>(g.inner->variant()))
                           throw ConfigError("boxed goal: inner goal may not itself be boxed");
                       check_box(g.y_lower, g.y_upper, "boxed goal Y");
                       for (std::size_t i = 0; i < g.y_lower.size(); ++i)
                           if (!std::isfinite(g.y_lower[i]) || !std::isfinite(g.y_upper[i]))
                               throw ConfigError("boxed goal: Y must be bounded");
                       if (g.inner->dim() != g.y_lower.size())
                           throw ConfigError("boxed goal: Y dimension does not match inner goal");
                       if (const auto* b = std::get_if<BoxGoal>(&g.inner->variant())) {
                           Vec lo, hi;
                           intersect_boxes(b->lower, b->upper, g.y_lower, g.y_upper, lo, hi);
                           for (std::size_t i = 0; i < lo.size(); ++i)
                               if (lo[i] > hi[i]) throw ConfigError("boxed goal: inner ∩ Y is empty");
                       } else {
                           const auto f = gap_form(std::get<MaxMinGapGoal>(g.inner->variant()), g.y_lower,
                                                   g.y_upper);
                           if (f.l_lo > f.l_hi) throw ConfigError("boxed goal: inner ∩ Y is empty");
                       }
                   },
               },
               v_);
}

GoalSpec GoalSpec::box(Vec lower, Vec upper) { return GoalSpec(BoxGoal{std::move(lower), std::move(upper)}); }

GoalSpec GoalSpec::max_min_gap(std::size_t m, double rho, bool nonneg) {
    return GoalSpec(MaxMinGapGoal{m, rho, nonneg});
}

GoalSpec GoalSpec::boxed(const GoalSpec& inner, Vec y_lower, Vec y_upper) {
    return GoalSpec(BoxedGoal{std::make_shared<const GoalSpec>(inner), std::move(y_lower), std::move(y_upper)});
}

std::size_t GoalSpec::dim() const {
    return std::visit(Overloaded{
                          [](const BoxGoal& g) { return g.lower.size(); },
                          [](const MaxMinGapGoal& g) { return g.m; },
                          [](const BoxedGoal& g) { return g.y_lower.size(); },
                      },
                      v_);
}

ConeKind GoalSpec::cone() const {
    if (const auto* g = std::get_if<MaxMinGapGoal>(&v_)) return g->nonneg ? ConeKind::NonnegRay : ConeKind::Line;
    return ConeKind::Zero;
}

const char* GoalSpec::kind_name() const {
    return std::visit(Overloaded{
                          [](const BoxGoal&) { return "box"; },
                          [](const MaxMinGapGoal&) { return "max_min_gap"; },
                          [](const BoxedGoal&) { return "boxed"; },
                      },
                      v_);
}

bool GoalSpec::full_dimensional() const {
    return std::visit(Overloaded{
                          [](const BoxGoal& g) {
                              for (std::size_t i = 0; i < g.lower.size(); ++i)
                                  if (!(g.lower[i] < g.upper[i])) return false;
                              return true;
                          },
                          [](const MaxMinGapGoal& g) { return g.rho > 0.0; },
                          [](const BoxedGoal& g) {
                              if (!g.inner->full_dimensional()) return false;
                              for (std::size_t i = 0; i < g.y_lower.size(); ++i)
                                  if (!(g.y_lower[i] < g.y_upper[i])) return false;
                              return true;
                          },
                      },
                      v_);
}

Vec support_point(const GoalSpec& goal, ConstVecView p) {
    check_dim(goal, p.size());
    return std::visit(Overloaded{
                          [&](const BoxGoal& g) { return box_support(g.lower, g.upper, p); },
                          [&](const MaxMinGapGoal& g) {
                              Vec v(p.size());
                              for (std::size_t i = 0; i < p.size(); ++i) v[i] = p[i] > 0.0 ? g.rho : 0.0;
                              return v;
                          },
                          [&](const BoxedGoal& g) {
                              if (const auto* b = std::get_if<BoxGoal>(&g.inner->variant())) {
                                  Vec lo, hi;
                                  intersect_boxes(b->lower, b->upper, g.y_lower, g.y_upper, lo, hi);
                                  return box_support(lo, hi, p);
                              }
                              return gap_support(
                                  gap_form(std::get<MaxMinGapGoal>(g.inner->variant()), g.y_lower, g.y_upper), p);
                          },
                      },
                      goal.variant());
}

double support_value(const GoalSpec& goal, ConstVecView p) { return dot(p, support_point(goal, p)); }

Vec project_polar(const GoalSpec& goal, ConstVecView u) {
    check_dim(goal, u.size());
    Vec out(u.begin(), u.end());
    const double s = sum(u);
    const double mean = s / static_cast<double>(u.size());
    switch (goal.cone()) {
        case ConeKind::Zero:
            break;
        case ConeKind::Line:
            for (double& v : out) v -= mean;
            break;
        case ConeKind::NonnegRay:
            if (s > 0.0)
                for (double& v : out) v -= mean;
            break;
    }
    return out;
}

bool in_polar(const GoalSpec& goal, ConstVecView p, double tol) {
    if (goal.cone() == ConeKind::Zero) return true;
    double l1 = 0.0;
    for (double v : p) l1 += std::abs(v);
    const double scaled = tol * std::max(1.0, l1);
    const double s = sum(p);
    return goal.cone() == ConeKind::Line ? std::abs(s) <= scaled : s <= scaled;
}

GoalProjection project_to_goal(const GoalSpec& goal, ConstVecView y) {
    check_dim(goal, y.size());
    return std::visit(Overloaded{
                          [&](const BoxGoal& g) { return box_project(g.lower, g.upper, y); },
                          [&](const MaxMinGapGoal& g) { return gap_project(gap_form(g), y); },
                          [&](const BoxedGoal& g) {
                              if (const auto* b = std::get_if<BoxGoal>(&g.inner->variant())) {
                                  Vec lo, hi;
                                  intersect_boxes(b->lower, b->upper, g.y_lower, g.y_upper, lo, hi);
                                  return box_project(lo, hi, y);
                              }
                              return gap_project(
                                  gap_form(std::get<MaxMinGapGoal>(g.inner->variant()), g.y_lower, g.y_upper), y);
                          },
                      },
                      goal.variant());
}

double distance_to_goal(const GoalSpec& goal, ConstVecView y) { return project_to_goal(goal, y).distance; }

bool contains(const GoalSpec& goal, ConstVecView y, double tol) { return distance_to_goal(goal, y) <= tol; }

double max_linf_to_q(const GoalSpec& goal, ConstVecView lo, ConstVecView hi) {
    const std::size_t m = goal.dim();
    check_dim(goal, lo.size());
    check_dim(goal, hi.size());
    double best = 0.0;
    Vec e(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        e[i] = 1.0;
        const double q_hi = support_point(goal, e)[i];
        e[i] = -1.0;
        const double q_lo = support_point(goal, e)[i];
        e[i] = 0.0;
        best = std::max({best, hi[i] - q_lo, q_hi - lo[i]});
    }
    return best;
}

}  // namespace odmp
