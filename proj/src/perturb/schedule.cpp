#include "cgreat/perturb/schedule.hpp"

#include <cmath>
#include <sstream>

#include "cgreat/core/errors.hpp"
#include "cgreat/core/orbit.hpp"

namespace cgreat::perturb {

Real Sequence::at(long j) const {
    if (!has(j)) throw Error(ErrorKind::Precondition, "sequence index out of range");
    return v[static_cast<std::size_t>(j - lo)];
}

Real& Sequence::at(long j) {
    if (!has(j)) throw Error(ErrorKind::Precondition, "sequence index out of range");
    return v[static_cast<std::size_t>(j - lo)];
}

bool CocycleSchedule::has_bb(long j) const {
    return has_b() ? b.has(j) && b.has(j - 1) : c.has(j) && c.has(j - 1);
}

Real CocycleSchedule::bb(long j) const {
    if (has_b()) return b.at(j) * b.at(j - 1);
    return c.at(j - 1) / c.at(j);
}

namespace {

void fill_c(CocycleSchedule& s) {
    long horizon = s.horizon;
    s.c.lo = -horizon;
    s.c.v.assign(static_cast<std::size_t>(2 * horizon + 1), 0);
    s.c.at(0) = 1;
    for (long j = 1; j <= horizon; ++j) s.c.at(j) = s.c.at(j - 1) / (s.b.at(j) * s.b.at(j - 1));
    for (long j = -1; j >= -horizon; --j) s.c.at(j) = s.c.at(j + 1) * s.b.at(j + 1) * s.b.at(j);
}

}  // namespace

CocycleSchedule compute_schedule(const Lift& f, Real x, long horizon) {
    if (horizon < 2) throw Error(ErrorKind::Precondition, "schedule horizon must be >= 2");
    CocycleSchedule s;
    s.x = x;
    s.horizon = horizon;
    OrbitSegment orb = iterate(f, x, -horizon - 1, horizon + 1);
    s.points = {orb.j_min, orb.points};
    s.cocycle = {orb.j_min, orb.derivs};
    s.b.lo = orb.j_min;
    for (Real p : orb.points) s.b.v.push_back(f.deriv(p));
    fill_c(s);
    return s;
}

CocycleSchedule schedule_from_b(long horizon, std::vector<Real> b) {
    if (horizon < 2) throw Error(ErrorKind::Precondition, "schedule horizon must be >= 2");
    if (b.size() != static_cast<std::size_t>(2 * horizon + 3))
        throw Error(ErrorKind::Precondition, "b must cover [-H-1, H+1]");
    CocycleSchedule s;
    s.horizon = horizon;
    s.b = {-horizon - 1, std::move(b)};
    fill_c(s);
    return s;
}


CocycleSchedule schedule_from_c(long lo, std::vector<Real> c) {
    CocycleSchedule s;
    s.c = {lo, std::move(c)};
    if (!s.c.has(0)) throw Error(ErrorKind::Precondition, "c sequence must contain index 0");
    s.horizon = std::min(-lo, s.c.hi());
    return s;
}

Real recurrence_error(const CocycleSchedule& s) {
    Real worst = 0;
    if (!s.has_b()) return 0;
    for (long j = s.c.lo + 1; j <= s.c.hi(); ++j)
        worst = std::max(worst, std::fabs(s.c.at(j) * s.b.at(j) * s.b.at(j - 1) - s.c.at(j - 1)));
    return worst;
}

Real tail_normalizer(const CocycleSchedule& s, long N, long N_prime) {
    Real head = 0, tail = 0;
    for (long j = -N; j <= N; ++j) head += s.c.at(j);
    for (long j = -N_prime; j < -N; ++j) tail += s.c.at(j);
    return tail / head;
}

Windows choose_windows(const CocycleSchedule& s, Real smallness, Real largeness) {
    long H = std::min(-s.c.lo, s.c.hi());
    Windows w;
    long N = 1;
    while (N <= H && !(std::max(s.c.at(N), s.c.at(-N)) < smallness)) ++N;
    if (N > H) {
        std::ostringstream os;
        os << "no N <= " << H << " with max(c_N, c_-N) < " << static_cast<double>(smallness);
        throw Error(ErrorKind::HorizonExhausted, os.str());
    }
    w.N = N;
    for (long j = -N; j <= N; ++j) w.e_minus_N += s.c.at(j);
    Real tail = 0, best = 0;
    for (long Np = N + 1; Np <= -s.c.lo; ++Np) {
        tail += s.c.at(-Np);
        Real tau = tail / w.e_minus_N;
        best = std::max(best, tau);
        if (s.c.at(-Np) < smallness && tau > largeness) {
            w.N_prime = Np;
            w.tau = tau;
            return w;
        }
    }
    std::ostringstream os;
    os << "N = " << N << " but no N' <= " << -s.c.lo << " reaches tau > " << static_cast<double>(largeness)
       << " with small c_-N' (best tau " << static_cast<double>(best) << ")";
    throw Error(ErrorKind::HorizonExhausted, os.str());
}

EStaircase build_e(const CocycleSchedule& s, long N, long N_prime) {
    if (N < 0 || N_prime <= N) throw Error(ErrorKind::Precondition, "windows need 0 <= N < N'");
    if (!s.c.has(N) || !s.c.has(-N_prime)) throw Error(ErrorKind::Precondition, "windows exceed the schedule");
    EStaircase out;
    out.N = N;
    out.N_prime = N_prime;
    out.tau = tail_normalizer(s, N, N_prime);
    out.e.lo = -N_prime - 1;
    out.e.v.assign(static_cast<std::size_t>(N + N_prime + 3), 0);
    for (long j = N; j >= -N; --j) out.e.at(j) = out.e.at(j + 1) + s.c.at(j);
    for (long j = -N - 1; j >= -N_prime; --j) out.e.at(j) = out.e.at(j + 1) - s.c.at(j) / out.tau;
    // the staircase lands on zero at -N' by the choice of tau
    if (std::fabs(out.e.at(-N_prime)) > 1e-12L * std::max<Real>(1, out.e.at(-N)))
        throw Error(ErrorKind::NegativeE, "staircase does not close at -N'");
    out.e.at(-N_prime) = 0;
    for (Real e : out.e.v) {
        if (e < 0) throw Error(ErrorKind::NegativeE, "negative e_j");
        out.sup_e = std::max(out.sup_e, e);
    }
    return out;
}

std::vector<Residual> residuals(const CocycleSchedule& s, const EStaircase& e) {
    std::vector<Residual> out;
    for (long j = -e.N_prime - 1; j <= e.N + 2; ++j) {
        Real step = e.at(j + 1) - e.at(j);
        Real r = e.at(j - 1) - e.at(j);
        if (step != 0) {
            if (!s.has_bb(j)) continue;
            r += step * s.bb(j);
        }
        out.push_back({j, r});
    }
    return out;
}

bool is_boundary_index(const EStaircase& e, long j) { return j == -e.N_prime || j == -e.N || j == e.N + 1; }

Real forward_sum(const CocycleSchedule& s) {
    Real sum = 0;
    for (long j = 0; j <= s.c.hi(); ++j) sum += s.c.at(j);
    return sum;
}

Real epsilon0(Real C, Real C_prime) {
    if (!(C > 0) || !(C_prime >= 0)) throw Error(ErrorKind::Precondition, "epsilon0 needs C > 0 and C' >= 0");
    return 1 / (C * (1 + C_prime));
}

}  // namespace cgreat::perturb
