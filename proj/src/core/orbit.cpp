#include "cgreat/core/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cgreat/core/errors.hpp"

namespace cgreat {

OrbitSegment iterate(const Lift& f, Real x, long j_min, long j_max) {
    if (j_min > 0 || j_max < 0) throw Error(ErrorKind::Precondition, "iterate needs j_min <= 0 <= j_max");
    OrbitSegment o;
    o.base = x;
    o.j_min = j_min;
    o.j_max = j_max;
    std::size_t n = static_cast<std::size_t>(j_max - j_min + 1);
    o.points.assign(n, 0);
    o.derivs.assign(n, 0);
    std::size_t zero = static_cast<std::size_t>(-j_min);
    o.points[zero] = x;
    o.derivs[zero] = 1;
    for (std::size_t i = zero; i + 1 < n; ++i) {
        Jet j = f.jet(o.points[i]);
        o.points[i + 1] = j.value;
        o.derivs[i + 1] = j.deriv * o.derivs[i];
    }
    for (std::size_t i = zero; i > 0; --i) {
        Real prev = f.solve(o.points[i]);
        o.points[i - 1] = prev;
        o.derivs[i - 1] = o.derivs[i] / f.jet(prev).deriv;
    }
    return o;
}

RotationEstimate rotation_number(const Lift& f, Real x, long n) {
    if (n < 1) throw Error(ErrorKind::Precondition, "rotation_number needs n >= 1");
    Real y = x;
    for (long i = 0; i < n; ++i) y = f.value(y);
    return {(y - x) / static_cast<Real>(n), Real(1) / static_cast<Real>(n)};
}

DeltaProbe delta_stat(const Lift& f, Real x, Real u, Real v) {
    if (!(u > 0 && v >= u && v < Real(0.5)))
        throw Error(ErrorKind::Precondition, "delta_stat needs 0 < u <= v < 1/2");
    Real fx = f.value(x);
    Real num = f.value(x + u) - fx;
    Real den = f.value(x + v) - fx;
    if (std::fabs(den) < 1e-15L * v) {
        throw Error(ErrorKind::DegenerateProbe, "difference quotient denominator vanishes");
    }
    DeltaProbe p{x, u, v, 1};
    // The u == v ratio collapses to 1 exactly.
    p.value = u == v ? Real(1) : (v / u) * (num / den);
    return p;
}

CGoodProfile cgood_profile(const Lift& f, Real x, long horizon) {
    if (horizon < 1) throw Error(ErrorKind::Precondition, "cgood_profile needs K >= 1");
    OrbitSegment o = iterate(f, x, -horizon + 1, horizon - 1);
    CGoodProfile p;
    p.horizon = horizon;
    for (long n = 0; n < horizon; ++n) {
        Real d = o.deriv(n);
        p.s_plus += 1 / (d * d);
        p.s_plus_partial.push_back(p.s_plus);
    }
    for (long n = 1; n < horizon; ++n) {
        Real d = o.deriv(-n);
        p.s_minus += 1 / (d * d);
        p.m_minus = std::max(p.m_minus, std::fabs(d));
        p.s_minus_partial.push_back(p.s_minus);
        p.m_minus_partial.push_back(p.m_minus);
    }
    return p;
}

bool is_cgood_proxy(const CGoodProfile& profile, Real C, Real growth_threshold,
                    const CGoodProxyOptions& opts) {
    if (profile.horizon < opts.min_horizon) {
        std::ostringstream os;
        os << "profile horizon " << profile.horizon << " below minimum " << opts.min_horizon;
        throw Error(ErrorKind::Precondition, os.str());
    }
    return profile.s_plus < C && profile.m_minus > growth_threshold && profile.s_minus > profile.s_plus;
}

Function1D sym_sum(const Lift& f) {
    return {[f](Real x) {
        Jet a = f.jet(x);
        Real back = f.solve(x);
        Jet b = f.jet(back);
        return Jet{a.value + back, a.deriv + 1 / b.deriv};
    }};
}

Real c0_distance(const Lift& f, const Lift& g, const std::vector<Real>& samples) {
    Real d = 0;
    for (Real x : samples) d = std::max(d, std::fabs(f.value(x) - g.value(x)));
    return d;
}

Real c0_distance(const Lift& f, const Lift& g, std::size_t grid, std::size_t per_feature) {
    if (grid < 1000) throw Error(ErrorKind::Precondition, "distance grid must have >= 1000 points");
    return c0_distance(f, g, sample_points({&f, &g}, grid, per_feature));
}

Real c1_distance_symsum(const Lift& f, const Lift& g, const std::vector<Real>& samples) {
    Function1D F = sym_sum(f), G = sym_sum(g);
    Real d = 0;
    for (Real x : samples) {
        Jet a = F(x), b = G(x);
        d = std::max(d, std::fabs(a.value - b.value) + std::fabs(a.deriv - b.deriv));
    }
    return d;
}

Real c1_distance_symsum(const Lift& f, const Lift& g, std::size_t grid, std::size_t per_feature) {
    if (grid < 1000) throw Error(ErrorKind::Precondition, "distance grid must have >= 1000 points");
    Lift fi = f.inverse(), gi = g.inverse();
    return c1_distance_symsum(f, g, sample_points({&f, &g, &fi, &gi}, grid, per_feature));
}

}  // namespace cgreat
