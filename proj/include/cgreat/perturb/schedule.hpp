#pragma once

#include <vector>

#include "cgreat/core/lift.hpp"

namespace cgreat::perturb {

/// Real values indexed by a contiguous signed range [lo, lo + size).
struct Sequence {
    long lo = 0;
    std::vector<Real> v;

    long hi() const { return lo + static_cast<long>(v.size()) - 1; }
    bool has(long j) const { return j >= lo && j <= hi(); }
    Real at(long j) const;
    Real& at(long j);
};

/// Orbit data around a base point: points p_j = f^j(x) and b_j = Df(p_j) for
/// j in [-H-1, H+1], and c_j for j in [-H, H] (c_0 = 1, c_j b_j b_{j-1} = c_{j-1}).
struct CocycleSchedule {
    Real x = 0;
    long horizon = 0;
    Sequence points;
    Sequence b;
    Sequence c;
    Sequence cocycle;  // Df^j(x)

    bool has_b() const { return !b.v.empty(); }
    /// b_j b_{j-1}, from b when present, else c_{j-1} / c_j.
    Real bb(long j) const;
    bool has_bb(long j) const;
};

CocycleSchedule compute_schedule(const Lift& f, Real x, long horizon);

/// Schedule with prescribed b_j on [-H-1, H+1] and no map (points unset).
CocycleSchedule schedule_from_b(long horizon, std::vector<Real> b);

/// Schedule with prescribed c_j and no map (c given on [lo, lo + size)).
CocycleSchedule schedule_from_c(long lo, std::vector<Real> c);

/// max over j of |c_j b_j b_{j-1} - c_{j-1}|.
Real recurrence_error(const CocycleSchedule& s);

struct Windows {
    long N = 0;
    long N_prime = 0;
    Real tau = 0;      // (sum_{-N' <= j < -N} c_j) / e_{-N}
    Real e_minus_N = 0;
};

/// (sum_{-N' <= j < -N} c_j) / (sum_{-N <= j <= N} c_j).
Real tail_normalizer(const CocycleSchedule& s, long N, long N_prime);

/// Smallest N >= 1 with max(c_N, c_-N) < smallness, then the smallest N' > N
/// with c_-N' < smallness and tau > largeness. Throws HorizonExhausted.
Windows choose_windows(const CocycleSchedule& s, Real smallness, Real largeness);

/// e_j on [-N' - 1, N + 1]: zero above N and at -N', steps -c_j on [-N, N]
/// and c_j / tau on [-N', -N - 1].
struct EStaircase {
    long N = 0;
    long N_prime = 0;
    Real tau = 0;
    Sequence e;
    Real sup_e = 0;

    Real at(long j) const { return e.has(j) ? e.at(j) : 0; }
};

EStaircase build_e(const CocycleSchedule& s, long N, long N_prime);

/// r_j = (e_{j+1} - e_j) b_j b_{j-1} + (e_{j-1} - e_j) for every j in
/// [-N' - 1, N + 2] where it is computable.
struct Residual {
    long j = 0;
    Real value = 0;
};
std::vector<Residual> residuals(const CocycleSchedule& s, const EStaircase& e);

/// Residual indices where r_j is allowed to be nonzero: -N', -N, N + 1.
bool is_boundary_index(const EStaircase& e, long j);

/// sum_{0 <= j <= H} c_j over the schedule's forward range.
Real forward_sum(const CocycleSchedule& s);

/// 1 / (C (1 + C')).
Real epsilon0(Real C, Real C_prime);

}  // namespace cgreat::perturb
