#pragma once

// Goal sets in Motzkin form, Psi = Q + C with Q compact and C a closed convex
// cone. Three shapes are supported:
//
//   BoxGoal        Psi = {lower <= y <= upper},           Q = Psi,       C = {0}
//   MaxMinGapGoal  Psi = {max_i y_i - min_i y_i <= rho}    Q = [0,rho]^m, C = R*1
//                  (nonneg: additionally y >= 0)                         C = R+*1
//   BoxedGoal      Psi = inner ∩ Y for a box Y,           Q = Psi,       C = {0}
//
// The online algorithm needs argmax over Q, projection onto the polar cone of
// C, and the metrics need Euclidean distance to Psi.

#include <memory>
#include <variant>

#include "odmp/vec.hpp"

namespace odmp {

inline constexpr double kMembershipTol = 1e-9;

struct BoxGoal {
    Vec lower;
    Vec upper;
};

struct MaxMinGapGoal {
    std::size_t m = 0;
    double rho = 0.0;
    bool nonneg = true;
};

class GoalSpec;

struct BoxedGoal {
    std::shared_ptr<const GoalSpec> inner;
    Vec y_lower;
    Vec y_upper;
};

enum class ConeKind {
    Zero,          // C = {0}, C° = R^m
    Line,          // C = {λ1 : λ ∈ R}, C° = {w : 1·w = 0}
    NonnegRay,     // C = {λ1 : λ >= 0}, C° = {w : 1·w <= 0}
};

class GoalSpec {
public:
    using Variant = std::variant<BoxGoal, MaxMinGapGoal, BoxedGoal>;

    /// Validates the parameters; throws ConfigError on violation.
    explicit GoalSpec(Variant v);

    static GoalSpec box(Vec lower, Vec upper);
    static GoalSpec max_min_gap(std::size_t m, double rho, bool nonneg);
    static GoalSpec boxed(const GoalSpec& inner, Vec y_lower, Vec y_upper);

    const Variant& variant() const { return v_; }
    std::size_t dim() const;
    ConeKind cone() const;

    /// Distinguishes the three shapes by a stable name ("box", "max_min_gap", "boxed").
    const char* kind_name() const;

    /// Whether the set is full dimensional (strict box, rho > 0).
    bool full_dimensional() const;

private:
    Variant v_;
};

/// argmax_{v in Q} p·v. Zero coefficients pick the lower end of Q's range.
Vec support_point(const GoalSpec& goal, ConstVecView p);

/// Support function of Psi at p for p in C° (equals that of Q there).
double support_value(const GoalSpec& goal, ConstVecView p);

/// Euclidean projection onto the polar cone C°.
Vec project_polar(const GoalSpec& goal, ConstVecView u);

bool in_polar(const GoalSpec& goal, ConstVecView p, double tol = kMembershipTol);

struct GoalProjection {
    double distance = 0.0;
    Vec point;
};

/// Euclidean projection of y onto Psi together with the distance.
GoalProjection project_to_goal(const GoalSpec& goal, ConstVecView y);

double distance_to_goal(const GoalSpec& goal, ConstVecView y);

bool contains(const GoalSpec& goal, ConstVecView y, double tol = kMembershipTol);

/// Largest l∞ distance between a point of Q and any point in the box [lo, hi].
double max_linf_to_q(const GoalSpec& goal, ConstVecView lo, ConstVecView hi);

}  // namespace odmp
