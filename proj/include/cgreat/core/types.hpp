#pragma once

#include <cmath>
#include <vector>

namespace cgreat {

// Extended precision is needed at depth 3: the potential has slopes of order
// 1e8 on intervals of length 2^-24, so double rounding of a point would show
// up at the 1e-8 level in log-derivative identities.
using Real = long double;

/// Value and first derivative of a scalar function at a point.
struct Jet {
    Real value = 0;
    Real deriv = 0;
};

/// Closed interval [lo, hi] on the real line (lift coordinates).
struct Interval {
    Real lo = 0;
    Real hi = 0;

    Real center() const { return (lo + hi) / 2; }
    Real width() const { return hi - lo; }
    Real half_width() const { return (hi - lo) / 2; }
    bool contains(Real x) const { return lo <= x && x <= hi; }
};

/// Representative of x in [0, 1).
inline Real frac(Real x) {
    Real r = x - std::floor(x);
    return r >= 1 ? r - 1 : r;
}

/// Signed circle distance, reduced to [-1/2, 1/2).
inline Real wrap(Real d) {
    return d - std::floor(d + Real(0.5));
}

/// True when the two circle arcs (closed, given as lift intervals shorter
/// than 1/2) share a point, with an additional safety margin.
inline bool arcs_intersect(const Interval& a, const Interval& b, Real margin = 0) {
    Real d = std::fabs(wrap(a.center() - b.center()));
    return d <= a.half_width() + b.half_width() + margin;
}

}  // namespace cgreat
