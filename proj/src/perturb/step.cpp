#include "cgreat/perturb/step.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "cgreat/core/bumps.hpp"
#include "cgreat/core/errors.hpp"
#include "cgreat/core/json_util.hpp"
#include "cgreat/core/nodes.hpp"

namespace cgreat::perturb {

namespace {

// Smallest circular distance between the points, after reduction mod 1.
Real min_circle_gap(std::vector<Real> pts) {
    for (Real& p : pts) p = frac(p);
    std::sort(pts.begin(), pts.end());
    Real gap = pts.front() + 1 - pts.back();
    for (std::size_t i = 1; i < pts.size(); ++i) gap = std::min(gap, pts[i] - pts[i - 1]);
    return gap;
}

bool pairwise_disjoint(const std::vector<Interval>& ivs) {
    for (std::size_t a = 0; a < ivs.size(); ++a)
        for (std::size_t b = a + 1; b < ivs.size(); ++b)
            if (arcs_intersect(ivs[a], ivs[b], 0)) return false;
    return true;
}

bool in_any(const std::vector<Interval>& ivs, Real y) {
    for (const auto& iv : ivs) {
        Real d = std::fabs(wrap(y - iv.center()));
        if (d <= iv.half_width()) return true;
    }
    return false;
}

}  // namespace

Linearizer build_linearizer(const Lift& f, const CocycleSchedule& s, long N, long N_prime, Real delta,
                            const LinearizerOptions& opts) {
    if (!(delta > 0)) throw Error(ErrorKind::Precondition, "linearizer needs delta > 0");
    if (!s.points.has(-N_prime) || !s.points.has(N + 1))
        throw Error(ErrorKind::Precondition, "windows exceed the orbit range");
    Linearizer out;
    out.N = N;
    out.N_prime = N_prime;

    Real rho = opts.initial_half_width;
    if (!(rho > 0)) {
        std::vector<Real> pts;
        long reach = std::min(2 * N_prime, s.horizon + 1);
        for (long j = -reach; j <= reach; ++j) pts.push_back(s.points.at(j));
        rho = min_circle_gap(pts) / 4;
    }
    rho = std::min(rho, opts.width_cap);

    const Real anchor = s.points.at(-N_prime);
    const Real anchor_cocycle = s.cocycle.at(-N_prime);
    for (int halving = 0;; ++halving, rho /= 2) {
        if (halving > opts.max_halvings || rho < opts.floor_width) {
            std::ostringstream os;
            os << "no linearizer within " << static_cast<double>(delta) << " of identity after " << halving
               << " halvings (half-width " << static_cast<double>(rho) << ")";
            throw Error(ErrorKind::DeltaUnreachable, os.str());
        }
        std::vector<OrbitLinearizerNode::Patch> patches;
        std::vector<Interval> ivs;
        for (long j = -N_prime + 1; j <= N + 1; ++j) {
            OrbitLinearizerNode::Patch p;
            p.center = s.points.at(j);
            p.half_width = rho * s.cocycle.at(j);
            p.anchor = anchor;
            p.power = j + N_prime;
            p.slope = s.cocycle.at(j) / anchor_cocycle;
            p.index = static_cast<int>(j);
            patches.push_back(p);
            ivs.push_back({p.center - p.half_width, p.center + p.half_width});
        }
        if (!pairwise_disjoint(ivs)) continue;
        Lift h(std::make_shared<OrbitLinearizerNode>(f, patches));
        Real dev = 0;
        std::size_t n = std::max<std::size_t>(opts.samples_per_interval, 2);
        for (const auto& iv : ivs) {
            for (std::size_t i = 0; i <= n; ++i) {
                Real y = iv.lo + iv.width() * static_cast<Real>(i) / static_cast<Real>(n);
                dev = std::max(dev, std::fabs(h.node().jet(y).deriv - 1));
            }
        }
        if (!(dev < delta)) continue;
        out.h = h;
        out.f_lin = Lift::conjugate(h, f);
        out.rho0 = rho;
        out.patches = ivs;
        out.max_deriv_dev = dev;
        out.halvings = halving;
        return out;
    }
}

AffineCore select_affine_core(const Linearizer& lin, const CocycleSchedule& s) {
    const long N = lin.N, Np = lin.N_prime;
    // the germs fix the orbit points, so the cores are the chi = 1 windows
    // |y - p_j| <= rho_j / 2, up to the O(rho^2) deviation of the germs
    Real r = Real(0.4) * lin.rho0;
    Real last_slope = 0, last_endpoint = 0;
    // iterates are lifts of size up to max |p_j|; each carries rounding error
    Real coord = 1;
    for (long j = -Np; j <= N + 1; ++j) coord = std::max(coord, std::fabs(s.points.at(j)));
    const Real rounding = 1e4L * std::numeric_limits<Real>::epsilon() * coord;
    for (int attempt = 0; attempt < 30; ++attempt, r /= 2) {
        AffineCore core;
        core.half_width = r;
        for (long j = -Np; j <= N + 1; ++j) {
            Real w = r * s.cocycle.at(j);
            core.intervals.push_back({s.points.at(j) - w, s.points.at(j) + w});
        }
        for (Real t : {-r, r}) {
            Real z = s.points.at(0) + t;
            for (long j = 1; j <= N + 1; ++j) {
                z = lin.f_lin(z);
                core.endpoint_error = std::max(core.endpoint_error,
                                               std::fabs(z - (s.points.at(j) + t * s.cocycle.at(j))));
            }
            z = s.points.at(0) + t;
            for (long j = -1; j >= -Np; --j) {
                z = lin.f_lin.solve(z);
                core.endpoint_error = std::max(core.endpoint_error,
                                               std::fabs(z - (s.points.at(j) + t * s.cocycle.at(j))));
            }
        }
        for (long j = -Np; j <= N; ++j) {
            const Interval& iv = core.intervals[static_cast<std::size_t>(j + Np)];
            for (Real y : {iv.lo, iv.center(), iv.hi}) {
                Real b = s.b.at(j);
                core.slope_error = std::max(core.slope_error, std::fabs(lin.f_lin.deriv(y) - b) / b);
            }
        }
        last_slope = core.slope_error;
        last_endpoint = core.endpoint_error / r;
        if (core.slope_error < 1e-9L && core.endpoint_error < 1e-9L * r + rounding) return core;
    }
    std::ostringstream os;
    os << "no affine core survives the pullback (slope error " << static_cast<double>(last_slope)
       << ", relative endpoint error " << static_cast<double>(last_endpoint) << ")";
    throw Error(ErrorKind::EmptyCore, os.str());
}

Lift build_bump_conjugacy(const EStaircase& e, const AffineCore& core, long N_prime, Real delta) {
    if (!(delta > 0 && delta <= 0.25L)) throw Error(ErrorKind::Precondition, "bump depth must lie in (0, 1/4]");
    if (1 - e.sup_e * delta < 0.5L)
        throw Error(ErrorKind::Precondition, "1 - e_j delta < 1/2; reduce delta");
    std::vector<BumpDerivNode::Patch> patches;
    for (long j = -N_prime + 1; j <= e.N; ++j) {
        Real ej = e.at(j);
        if (ej == 0) continue;
        const Interval& iv = core.intervals.at(static_cast<std::size_t>(j + N_prime));
        patches.push_back({iv.center(), iv.half_width(), ej, static_cast<int>(j)});
    }
    if (patches.empty()) return Lift::identity();
    return Lift(std::make_shared<BumpDerivNode>(std::move(patches), delta));
}

ProbeResult find_uv(const Lift& g, Real x, Real core_width, Real base_width, Real eps0, Real margin,
                    Real macro_scale, int max_k) {
    ProbeResult best;
    best.x = x;
    best.threshold = 1 + margin * eps0;
    // below this u the difference g(x + u) - g(x) is dominated by rounding
    const Real u_floor = 1e5L * std::numeric_limits<Real>::epsilon() * (1 + std::fabs(x) + std::fabs(g(x)));
    for (int ku = 1; ku <= max_k; ++ku) {
        Real u = std::ldexp(core_width, -ku);
        if (u < u_floor) break;
        for (int kv = 1; kv <= max_k; ++kv) {
            Real v = std::ldexp(base_width, kv);
            if (v >= macro_scale || v >= 0.5L) break;
            if (!(u < v)) continue;
            best.scan.push_back(delta_stat(g, x, u, v));
        }
    }
    if (best.scan.empty()) throw Error(ErrorKind::ProbeNotFound, "no admissible (u, v) pair below the macro scale");
    Real top = 0;
    for (const auto& p : best.scan) top = std::max(top, std::fabs(std::log(p.value)));
    // among pairs keeping half the best log-distortion: largest u, then smallest v,
    // so later stages have room below u
    const DeltaProbe* pick = nullptr;
    for (const auto& p : best.scan) {
        if (std::fabs(std::log(p.value)) < top / 2) continue;
        if (!pick || p.u > pick->u || (p.u == pick->u && p.v < pick->v)) pick = &p;
    }
    best.u = pick->u;
    best.v = pick->v;
    best.raw = pick->value;
    best.distortion = std::max(pick->value, 1 / pick->value);
    best.found = best.distortion > best.threshold;
    return best;
}

Real linearity_scale(const Lift& f, Real x, Real rel_tol, Real cap) {
    Real d = f.deriv(x);
    Real fx = f(x);
    Real good = 0;
    // below about 2^-40 the secants resolve rounding rather than the map
    for (int k = 40; k >= 1; --k) {
        Real v = std::ldexp(Real(1), -k);
        if (v > cap) break;
        Real right = (f(x + v) - fx) / v, left = (fx - f(x - v)) / v;
        if (std::fabs(right / d - 1) >= rel_tol || std::fabs(left / d - 1) >= rel_tol) break;
        good = v;
    }
    if (good == 0) throw Error(ErrorKind::DegenerateProbe, "map is not linear at any dyadic scale around x");
    return good;
}

ProbeResult recheck_probe(const Lift& g, const ProbeResult& probe) {
    ProbeResult out = probe;
    out.scan.clear();
    DeltaProbe p = delta_stat(g, probe.x, probe.u, probe.v);
    out.raw = p.value;
    out.distortion = std::max(p.value, 1 / p.value);
    out.found = out.distortion > out.threshold;
    return out;
}

TransferReport transfer_check(const Lift& f, const Lift& g, const Lift& H, const std::vector<Interval>& supports,
                              Real x, Real C, Real delta, Real sup_e, const TransferOptions& opts) {
    TransferReport out;
    Real lambda = opts.lambda > 0 ? opts.lambda : C / 10;
    Real Lambda = opts.Lambda > 0 ? opts.Lambda : 2 * (1 + sup_e);
    out.base_point_avoids = !in_any(supports, x);

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (std::size_t i = 0; i < opts.samples; ++i) {
        Real y = x + opts.neighborhood * static_cast<Real>(unif(rng));
        OrbitSegment fo = iterate(f, y, 0, opts.horizon - 1);
        Real sum = 0, tail = 0;
        for (long n = 0; n < opts.horizon; ++n) {
            Real inv2 = 1 / (fo.deriv(n) * fo.deriv(n));
            sum += inv2;
            if (n >= opts.m) tail += inv2;
        }
        bool ok_sum = sum < C - lambda;
        bool ok_tail = tail < lambda / Lambda;
        bool ok_avoid = true;
        Real z = y;
        for (long n = 0; n <= opts.m && ok_avoid; ++n) {
            if (in_any(supports, z)) ok_avoid = false;
            z = g(z);
        }
        if (ok_avoid) {
            OrbitSegment go = iterate(g, y, 0, std::min(opts.m, opts.horizon - 1));
            for (long n = 0; n <= go.j_max; ++n)
                out.max_cocycle_mismatch =
                    std::max(out.max_cocycle_mismatch, std::fabs(go.deriv(n) - fo.deriv(n)) / fo.deriv(n));
        }
        ++out.samples;
        out.pass_sum += ok_sum;
        out.pass_tail += ok_tail;
        out.pass_avoid += ok_avoid;
        out.pass_all += ok_sum && ok_tail && ok_avoid;
    }
    out.fraction = out.samples ? static_cast<Real>(out.pass_all) / static_cast<Real>(out.samples) : 0;
    for (Real s : sample_points({&H}, 2000, 32)) out.conjugacy_deriv_max = std::max(out.conjugacy_deriv_max, H.deriv(s));
    out.conjugacy_deriv_bound = (1 + delta) * (1 + sup_e);
    return out;
}

namespace {

Real symsum_deriv_sup(const Lift& f, std::size_t grid) {
    Function1D F = sym_sum(f);
    Real sup = 0;
    for (Real y : sample_points({&f}, grid, 16)) sup = std::max(sup, std::fabs(F(y).deriv));
    return sup;
}

// max over I'_j, -N' < j <= N, of the gap between D(g + g^-1) - D(f' + f'^-1)
// at h(y) and kappa r_j / ((1 + e_j kappa) b_{j-1}).
Real identity_error(const StepResult& r, std::size_t per_interval) {
    const BumpDerivNode* bump = dynamic_cast<const BumpDerivNode*>(&r.bump.node());
    if (!bump) return 0;
    Function1D G = sym_sum(r.g);
    Function1D F = sym_sum(r.linearizer.f_lin);
    std::vector<Real> res_at(static_cast<std::size_t>(r.e.N + r.e.N_prime + 4), 0);
    for (const auto& res : r.report.residuals)
        if (res.j >= -r.e.N_prime - 1 && res.j <= r.e.N + 2) res_at[static_cast<std::size_t>(res.j + r.e.N_prime + 1)] = res.value;
    Real worst = 0;
    for (const auto& p : bump->patches()) {
        long j = p.index;
        Real rj = res_at[static_cast<std::size_t>(j + r.e.N_prime + 1)];
        Real ej = r.e.at(j);
        Real bjm1 = r.schedule.b.at(j - 1);
        std::size_t n = std::max<std::size_t>(per_interval, 2);
        for (std::size_t i = 1; i < n; ++i) {
            Real t = -0.5L + static_cast<Real>(i) / static_cast<Real>(n);
            Real y = p.center + 2 * p.half_width * t;
            Real kappa = bump->bump().eval(t).value;
            Real z = r.bump(y);
            Real predicted = kappa / ((1 + ej * kappa) * bjm1) * rj;
            worst = std::max(worst, std::fabs(G(z).deriv - F(z).deriv - predicted));
        }
    }
    return worst;
}

Real outside_mismatch(const Lift& f, const Lift& g, const std::vector<Interval>& supports) {
    Real worst = 0;
    for (int i = 0; i < 1000; ++i) {
        Real y = (i + Real(0.5)) / 1000;
        if (in_any(supports, y) || in_any(supports, f(y))) continue;
        worst = std::max(worst, std::fabs(g(y) - f(y)));
    }
    return worst;
}

}  // namespace

StepResult apply_step(const Lift& f, Real x, const StepConfig& cfg) {
    if (!(cfg.epsilon > 0)) throw Error(ErrorKind::Precondition, "epsilon must be positive");
    StepResult r;
    StepReport& rep = r.report;
    rep.x = x;
    rep.epsilon = cfg.epsilon;
    rep.C = cfg.C;
    r.schedule = compute_schedule(f, x, cfg.horizon);
    rep.recurrence_error = recurrence_error(r.schedule);

    rep.profile = cgood_profile(f, x, cfg.horizon);
    rep.symsum_deriv_sup = symsum_deriv_sup(f, 2000);
    rep.cgood_precondition =
        is_cgood_proxy(rep.profile, cfg.C, cfg.growth_threshold) && rep.symsum_deriv_sup < cfg.C;
    if (cfg.require_cgood && !rep.cgood_precondition)
        throw Error(ErrorKind::Precondition, "base point fails the finite-horizon C-good proxy");

    if (cfg.windows) {
        rep.windows = *cfg.windows;
        rep.windows.tau = tail_normalizer(r.schedule, rep.windows.N, rep.windows.N_prime);
    } else {
        rep.windows = choose_windows(r.schedule, cfg.smallness, cfg.largeness);
    }
    r.e = build_e(r.schedule, rep.windows.N, rep.windows.N_prime);
    rep.windows.tau = r.e.tau;
    rep.windows.e_minus_N = r.e.at(-rep.windows.N);
    rep.residuals = residuals(r.schedule, r.e);
    rep.sup_e = r.e.sup_e;
    rep.e0 = r.e.at(0);
    rep.b0 = r.schedule.b.at(0);
    rep.C_prime = forward_sum(r.schedule);
    rep.eps0 = epsilon0(cfg.C, rep.C_prime);
    rep.delta = cfg.delta > 0 ? cfg.delta : std::min(cfg.epsilon / 10, 1 / (4 * (1 + r.e.sup_e)));
    rep.delta = std::min(rep.delta, Real(0.25));

    // v must stay where f is linear at x, and I_0 well below that
    rep.linear_scale = linearity_scale(f, x, cfg.probe_margin * rep.eps0 / 8, cfg.macro_scale);
    LinearizerOptions lo = cfg.linearizer;
    lo.width_cap = std::min(lo.width_cap, rep.linear_scale / 8);
    for (int attempt = 0;; ++attempt) {
        r.linearizer = build_linearizer(f, r.schedule, rep.windows.N, rep.windows.N_prime, rep.delta, lo);
        r.core = select_affine_core(r.linearizer, r.schedule);
        r.bump = build_bump_conjugacy(r.e, r.core, rep.windows.N_prime, rep.delta);
        r.H = Lift::compose(r.bump, r.linearizer.h);
        r.g = Lift::conjugate(r.bump, r.linearizer.f_lin);
        rep.c0_distance = c0_distance(r.H, Lift::identity(), 2000, 32);
        if (rep.c0_distance < cfg.epsilon || attempt >= 8) break;
        lo.width_cap = r.linearizer.rho0 / 2;
    }
    rep.rho0 = r.linearizer.rho0;
    rep.core_half_width = r.core.half_width;
    rep.linearizer_deriv_dev = r.linearizer.max_deriv_dev;
    rep.core_slope_error = r.core.slope_error;
    rep.c1_distance = c1_distance_symsum(r.g, f, cfg.c1_grid, 32);
    rep.c0_ok = rep.c0_distance < cfg.epsilon;
    rep.c1_ok = rep.c1_distance < cfg.epsilon;

    rep.drop = r.g.deriv(x) - f.deriv(x);
    rep.drop_predicted = -rep.b0 / (1 + rep.e0);
    rep.identity_error = identity_error(r, cfg.identity_samples);
    rep.outside_mismatch = outside_mismatch(f, r.g, r.linearizer.patches);
    rep.y = r.H(x);
    rep.fixed_point_displacement = std::fabs(rep.y - x);

    rep.probe = find_uv(r.g, rep.y, 2 * r.core.half_width, 2 * r.linearizer.rho0, rep.eps0, cfg.probe_margin,
                        rep.linear_scale);
    rep.transfer = transfer_check(f, r.g, r.H, r.linearizer.patches, x, cfg.C, rep.delta, r.e.sup_e, cfg.transfer);

    if (cfg.require_closeness && !(rep.c0_ok && rep.c1_ok)) {
        std::ostringstream os;
        os << "step misses epsilon = " << static_cast<double>(cfg.epsilon) << ": C0 distance "
           << static_cast<double>(rep.c0_distance) << ", C1 distance of symmetric sums "
           << static_cast<double>(rep.c1_distance);
        throw Error(ErrorKind::ClosenessFailure, os.str());
    }
    return r;
}

nlohmann::json to_json(const ProbeResult& p) {
    return {{"x", rounded(p.x)},          {"u", rounded(p.u)},
            {"v", rounded(p.v)},          {"delta", rounded(p.raw)},
            {"distortion", rounded(p.distortion)}, {"threshold", rounded(p.threshold)},
            {"found", p.found},           {"scanned", p.scan.size()}};
}

nlohmann::json to_json(const StepReport& r) {
    nlohmann::json res = nlohmann::json::array();
    for (const auto& x : r.residuals) res.push_back({{"j", x.j}, {"r", rounded(x.value)}});
    const auto& t = r.transfer;
    return {
        {"x", rounded(r.x)},
        {"y", rounded(r.y)},
        {"epsilon", rounded(r.epsilon)},
        {"C", rounded(r.C)},
        {"C_prime", rounded(r.C_prime)},
        {"eps0", rounded(r.eps0)},
        {"delta", rounded(r.delta)},
        {"N", r.windows.N},
        {"N_prime", r.windows.N_prime},
        {"tau", rounded(r.windows.tau)},
        {"sup_e", rounded(r.sup_e)},
        {"e0", rounded(r.e0)},
        {"b0", rounded(r.b0)},
        {"cgood_precondition", r.cgood_precondition},
        {"s_plus", rounded(r.profile.s_plus)},
        {"s_minus", rounded(r.profile.s_minus)},
        {"m_minus", rounded(r.profile.m_minus)},
        {"symsum_deriv_sup", rounded(r.symsum_deriv_sup)},
        {"linear_scale", rounded(r.linear_scale)},
        {"rho0", rounded(r.rho0)},
        {"core_half_width", rounded(r.core_half_width)},
        {"linearizer_deriv_dev", rounded(r.linearizer_deriv_dev)},
        {"core_slope_error", rounded(r.core_slope_error)},
        {"recurrence_error", rounded(r.recurrence_error)},
        {"c0_distance", rounded(r.c0_distance)},
        {"c1_distance", rounded(r.c1_distance)},
        {"c0_ok", r.c0_ok},
        {"c1_ok", r.c1_ok},
        {"drop", rounded(r.drop)},
        {"drop_predicted", rounded(r.drop_predicted)},
        {"identity_error", rounded(r.identity_error)},
        {"outside_mismatch", rounded(r.outside_mismatch)},
        {"fixed_point_displacement", rounded(r.fixed_point_displacement)},
        {"probe", to_json(r.probe)},
        {"transfer",
         {{"samples", t.samples}, {"pass_sum", t.pass_sum}, {"pass_tail", t.pass_tail},
          {"pass_avoid", t.pass_avoid}, {"pass_all", t.pass_all}, {"fraction", rounded(t.fraction)},
          {"base_point_avoids", t.base_point_avoids}, {"max_cocycle_mismatch", rounded(t.max_cocycle_mismatch)},
          {"conjugacy_deriv_max", rounded(t.conjugacy_deriv_max)},
          {"conjugacy_deriv_bound", rounded(t.conjugacy_deriv_bound)}}},
        {"residuals", res},
    };
}

}  // namespace cgreat::perturb
