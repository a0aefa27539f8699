#include "cgreat/twist/twist_map.hpp"

#include <algorithm>
#include <cmath>

#include "cgreat/core/json_util.hpp"

namespace cgreat::twist {

const char* to_string(DefectForm form) {
    return form == DefectForm::Corrected ? "corrected" : "half";
}

Function1D build_defect(const Lift& f, DefectForm form) {
    if (form == DefectForm::Corrected) {
        return {[f](Real x) {
            Real y = f.solve(x);
            Real d = f.deriv(x) + 1 / f.deriv(y) - 2;
            // differences first: f(x) - x and y - x are small, their sum is the defect
            return Jet{(f(x) - x) + (y - x), d};
        }};
    }
    return {[f](Real x) {
        Real y = f.solve(x);
        return Jet{(f(x) + y) / 2, (f.deriv(x) + 1 / f.deriv(y)) / 2};
    }};
}

TwistMap::TwistMap(Lift f, DefectForm form) : f_(std::move(f)), form_(form), phi_(build_defect(f_, form)) {}

AnnulusPoint TwistMap::apply_lift(AnnulusPoint p) const {
    Real t = p.theta + p.r;
    return {t, p.r + phi_.value(t)};
}

AnnulusPoint TwistMap::apply(AnnulusPoint p) const {
    AnnulusPoint q = apply_lift(p);
    q.theta = frac(q.theta);
    return q;
}

Matrix2 TwistMap::jacobian(AnnulusPoint p) const {
    Real dphi = phi_(p.theta + p.r).deriv;
    return {1, 1, dphi, 1 + dphi};
}

Matrix2 TwistMap::numeric_jacobian(AnnulusPoint p, Real eta) const {
    auto at = [&](Real dt, Real dr) { return apply_lift({p.theta + dt, p.r + dr}); };
    AnnulusPoint tp = at(eta, 0), tm = at(-eta, 0), rp = at(0, eta), rm = at(0, -eta);
    Real s = 2 * eta;
    return {(tp.theta - tm.theta) / s, (rp.theta - rm.theta) / s, (tp.r - tm.r) / s, (rp.r - rm.r) / s};
}

TwistReport twist_check(const TwistMap& g, const std::vector<Real>& thetas, Real r_lo, Real r_hi,
                        std::size_t r_steps, Real eta, Real tol) {
    if (r_steps < 2 || !(r_hi > r_lo)) throw Error(ErrorKind::Precondition, "twist_check: bad r grid");
    TwistReport rep;
    rep.fd_twist_min = INFINITY;
    rep.fd_twist_max = -INFINITY;
    rep.monotone = true;
    for (Real t : thetas) {
        Real prev = -INFINITY;
        for (std::size_t i = 0; i < r_steps; ++i) {
            Real r = r_lo + (r_hi - r_lo) * static_cast<Real>(i) / (r_steps - 1);
            Real th = g.apply_lift({t, r}).theta;
            Real fd = (g.apply_lift({t, r + eta}).theta - th) / eta;
            rep.fd_twist_min = std::min(rep.fd_twist_min, fd);
            rep.fd_twist_max = std::max(rep.fd_twist_max, fd);
            if (!(th > prev)) rep.monotone = false;
            prev = th;
            ++rep.points;
        }
    }
    rep.ok = rep.monotone && std::fabs(rep.fd_twist_min - 1) <= tol && std::fabs(rep.fd_twist_max - 1) <= tol;
    return rep;
}

DeterminantReport determinant_check(const TwistMap& g, const std::vector<AnnulusPoint>& points, Real eta) {
    DeterminantReport rep;
    for (const auto& p : points) {
        Matrix2 m = g.jacobian(p);
        Matrix2 n = g.numeric_jacobian(p, eta);
        rep.closed_form_max_dev = std::max(rep.closed_form_max_dev, std::fabs(m.det() - 1));
        rep.numeric_max_dev = std::max(rep.numeric_max_dev, std::fabs(n.det() - 1));
        Real e = std::max({std::fabs(m.a - n.a), std::fabs(m.b - n.b), std::fabs(m.c - n.c), std::fabs(m.d - n.d)});
        rep.fd_entry_max_dev = std::max(rep.fd_entry_max_dev, e);
        ++rep.points;
    }
    return rep;
}

Real invariance_residual(const TwistMap& g, const InvariantGraph& graph, const std::vector<Real>& thetas) {
    Real worst = 0;
    for (Real t : thetas) {
        AnnulusPoint q = g.apply_lift({t, graph.psi(t)});
        Real ft = graph.source()(t);
        Real d = std::max(std::fabs(q.theta - ft), std::fabs(q.r - graph.psi(ft)));
        worst = std::max(worst, d);
    }
    return worst;
}

ConjugacyReport restricted_conjugacy_check(const TwistMap& g, const InvariantGraph& graph,
                                           const std::vector<Real>& thetas, Real theta0, long n,
                                           Real projection_tol) {
    if (n <= 0) throw Error(ErrorKind::Precondition, "restricted_conjugacy_check: n must be positive");
    ConjugacyReport rep;
    for (Real t : thetas)
        rep.projection_error =
            std::max(rep.projection_error, std::fabs(g.apply_lift({t, graph.psi(t)}).theta - graph.source()(t)));
    AnnulusPoint p{theta0, graph.psi(theta0)};
    for (long i = 0; i < n; ++i) p = g.apply_lift(p);
    rep.iterations = n;
    rep.rotation_on_graph = (p.theta - theta0) / static_cast<Real>(n);
    rep.rotation_of_f = rotation_number(graph.source(), theta0, n).value;
    rep.rotation_gap = std::fabs(rep.rotation_on_graph - rep.rotation_of_f);
    rep.rotation_tol = 2 / static_cast<Real>(n);
    rep.ok = rep.projection_error <= projection_tol && rep.rotation_gap <= rep.rotation_tol;
    return rep;
}

GraphDiagnostics graph_diagnostics(const InvariantGraph& graph, const std::vector<perturb::ProbeResult>& probes,
                                   int min_log2, int max_log2) {
    if (min_log2 < 1 || max_log2 < min_log2 || max_log2 > 24)
        throw Error(ErrorKind::Precondition, "graph_diagnostics: bad grid range");
    GraphDiagnostics out;
    auto features = sample_points({&graph.source()}, 0, 16);
    for (Real x : features) out.feature_slope = std::max(out.feature_slope, std::fabs(graph.dpsi(x)));
    Real lo = INFINITY, hi = 0;
    for (int k = min_log2; k <= max_log2; ++k) {
        std::size_t n = std::size_t{1} << k;
        std::vector<Real> pts = features;
        for (std::size_t i = 0; i < n; ++i) pts.push_back(static_cast<Real>(i) / n);
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        pts.push_back(pts.front() + 1);
        Real slope = 0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            Real h = pts[i + 1] - pts[i];
            // near-duplicate feature endpoints: the quotient would be rounding noise
            if (h < 1e-10L) continue;
            slope = std::max(slope, std::fabs(graph.psi(pts[i + 1]) - graph.psi(pts[i])) / h);
        }
        out.levels.push_back({k, slope});
        lo = std::min(lo, slope);
        hi = std::max(hi, slope);
    }
    out.lipschitz = std::max(hi, out.feature_slope);
    out.refinement_spread = hi > 0 ? (hi - lo) / hi : 0;

    // The graph parametrisation theta + psi(theta) is the lift itself.
    for (const auto& p : probes) {
        Real x = p.x, u = p.u, v = p.v;
        Real base = graph.graph_lift(x);
        Real val = (v / u) * (graph.graph_lift(x + u) - base) / (graph.graph_lift(x + v) - base);
        out.graph_probes.push_back({x, u, v, val});
        out.probe_max_dev = std::max(out.probe_max_dev, std::fabs(val - p.raw));
    }
    return out;
}

nlohmann::json to_json(const TwistReport& r) {
    return {{"algebraic_twist", rounded(r.algebraic_twist)}, {"fd_twist_min", rounded(r.fd_twist_min)},
            {"fd_twist_max", rounded(r.fd_twist_max)},       {"monotone", r.monotone},
            {"points", r.points},                              {"ok", r.ok}};
}

nlohmann::json to_json(const DeterminantReport& r) {
    return {{"closed_form_max_dev", rounded(r.closed_form_max_dev)},
            {"numeric_max_dev", rounded(r.numeric_max_dev)},
            {"fd_entry_max_dev", rounded(r.fd_entry_max_dev)},
            {"points", r.points}};
}

nlohmann::json to_json(const ConjugacyReport& r) {
    return {{"projection_error", rounded(r.projection_error)}, {"rotation_on_graph", rounded(r.rotation_on_graph)},
            {"rotation_of_f", rounded(r.rotation_of_f)},       {"iterations", r.iterations},
            {"rotation_gap", rounded(r.rotation_gap)},         {"rotation_tol", rounded(r.rotation_tol)},
            {"ok", r.ok}};
}

nlohmann::json to_json(const GraphDiagnostics& r) {
    nlohmann::json levels = nlohmann::json::array();
    for (const auto& l : r.levels) levels.push_back({{"log2_grid", l.log2_grid}, {"max_slope", rounded(l.max_slope)}});
    nlohmann::json probes = nlohmann::json::array();
    for (const auto& p : r.graph_probes)
        probes.push_back({{"x", rounded(p.x)}, {"u", rounded(p.u)}, {"v", rounded(p.v)}, {"delta", rounded(p.value)}});
    return {{"levels", levels},
            {"feature_slope", rounded(r.feature_slope)},
            {"lipschitz", rounded(r.lipschitz)},
            {"refinement_spread", rounded(r.refinement_spread)},
            {"graph_probes", probes},
            {"probe_max_dev", rounded(r.probe_max_dev)}};
}

}  // namespace cgreat::twist
