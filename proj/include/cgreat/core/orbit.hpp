#pragma once

#include <functional>
#include <vector>

#include "cgreat/core/lift.hpp"

namespace cgreat {

/// Orbit f^j(x) and cocycle Df^j(x) for j in [j_min, j_max].
struct OrbitSegment {
    Real base = 0;
    long j_min = 0;
    long j_max = 0;
    std::vector<Real> points;  // index j - j_min
    std::vector<Real> derivs;

    Real point(long j) const { return points[static_cast<std::size_t>(j - j_min)]; }
    Real deriv(long j) const { return derivs[static_cast<std::size_t>(j - j_min)]; }
};

OrbitSegment iterate(const Lift& f, Real x, long j_min, long j_max);

struct RotationEstimate {
    Real value = 0;
    Real error_bound = 0;  // 1/n
};

RotationEstimate rotation_number(const Lift& f, Real x, long n);

struct DeltaProbe {
    Real x = 0;
    Real u = 0;
    Real v = 0;
    Real value = 1;
};

/// (v/u) (f(x+u) - f(x)) / (f(x+v) - f(x)); requires 0 < u <= v < 1/2.
DeltaProbe delta_stat(const Lift& f, Real x, Real u, Real v);

struct CGoodProfile {
    long horizon = 0;
    Real s_plus = 0;   // sum_{0 <= n < K} |Df^n|^-2
    Real s_minus = 0;  // sum_{-K < n < 0} |Df^n|^-2
    Real m_minus = 0;  // max_{-K < n < 0} |Df^n|
    std::vector<Real> s_plus_partial;   // entry n: sum over 0..n
    std::vector<Real> s_minus_partial;  // entry n-1: sum over -n..-1
    std::vector<Real> m_minus_partial;
};

CGoodProfile cgood_profile(const Lift& f, Real x, long horizon);

struct CGoodProxyOptions {
    long min_horizon = 200;
};

/// Finite-horizon surrogate for the C-good conditions:
/// S+(K) < C, M-(K) > growth_threshold, S-(K) > S+(K).
bool is_cgood_proxy(const CGoodProfile& profile, Real C, Real growth_threshold,
                    const CGoodProxyOptions& opts = {});

/// Scalar function with derivative (not necessarily monotone).
struct Function1D {
    std::function<Jet(Real)> eval;
    Jet operator()(Real x) const { return eval(x); }
    Real value(Real x) const { return eval(x).value; }
};

/// x -> f(x) + f^-1(x), derivative Df(x) + 1/Df(f^-1(x)).
Function1D sym_sum(const Lift& f);

/// sup over the sample grid (uniform grid plus feature interiors of both maps).
Real c0_distance(const Lift& f, const Lift& g, std::size_t grid = 1000, std::size_t per_feature = 32);
Real c0_distance(const Lift& f, const Lift& g, const std::vector<Real>& samples);

/// sup |F - G| + |DF - DG| for the symmetric sums F, G.
Real c1_distance_symsum(const Lift& f, const Lift& g, std::size_t grid = 1000,
                        std::size_t per_feature = 32);
Real c1_distance_symsum(const Lift& f, const Lift& g, const std::vector<Real>& samples);

}  // namespace cgreat
