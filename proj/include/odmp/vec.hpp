#pragma once

#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace odmp {

using Vec = std::vector<double>;
using ConstVecView = std::span<const double>;

inline double dot(ConstVecView a, ConstVecView b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

inline double norm2(ConstVecView a) { return std::sqrt(dot(a, a)); }

inline double sum(ConstVecView a) { return std::accumulate(a.begin(), a.end(), 0.0); }

inline double dist2(ConstVecView a, ConstVecView b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline bool all_finite(ConstVecView a) {
    for (double v : a)
        if (!std::isfinite(v)) return false;
    return true;
}

/// y += alpha * x
inline void axpy(double alpha, ConstVecView x, std::span<double> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace odmp
