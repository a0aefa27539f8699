#include "cgreat/app/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "cgreat/core/json_util.hpp"
#include "cgreat/core/orbit.hpp"

namespace cgreat::app {

using nlohmann::json;

namespace {

using Body = std::function<void(Check&)>;

Check run_check(int criterion, std::string id, std::string anchor, double limit_s, const Body& body) {
    Check c;
    c.criterion = criterion;
    c.id = std::move(id);
    c.anchor = std::move(anchor);
    c.bound["runtime_limit_s"] = limit_s;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(c);
    } catch (const std::exception& e) {
        c.pass = false;
        c.note = std::string("error: ") + e.what();
    }
    c.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (c.runtime_s > limit_s) {
        c.pass = false;
        if (!c.note.empty()) c.note += "; ";
        c.note += "runtime limit exceeded";
    }
    return c;
}

Real fd_error(const std::function<Jet(Real)>& f, const std::vector<Real>& xs, Real eta = 1e-6L) {
    Real worst = 0;
    for (Real x : xs) {
        Real fd = (f(x + eta).value - f(x - eta).value) / (2 * eta);
        worst = std::max(worst, std::fabs(fd - f(x).deriv));
    }
    return worst;
}

std::function<Jet(Real)> jet_of(const Lift& f) {
    return [f](Real x) { return f.jet(x); };
}

}  // namespace

std::string summary_line(const Check& c, bool strict) {
    const char* tag = !c.pass ? "FAIL" : (strict && c.proxy && c.marginal) ? "MARGINAL" : "PASS";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs", c.runtime_s);
    std::ostringstream os;
    os << "[" << tag << "] criterion " << c.criterion << " " << c.id << " (" << buf << ")";
    if (!c.note.empty()) os << " - " << c.note;
    return os.str();
}

VerificationReport run_acceptance(Pipeline& p, const std::vector<int>& only,
                                  const std::function<void(const Check&)>& on_check) {
    VerificationReport rep;
    rep.config_hash = config_hash(p.config());
    const PipelineConfig& cfg = p.config();
    auto want = [&](int k) { return only.empty() || std::find(only.begin(), only.end(), k) != only.end(); };
    auto add = [&](Check c) {
        if (on_check) on_check(c);
        rep.checks.push_back(std::move(c));
    };

    if (want(1)) add(run_check(1, "schedule_algebra", "e staircase: e_j from the c recurrence, tau, residual off the window ends",
                  1, [](Check& c) {
        auto s = perturb::schedule_from_c(-3, {64, 16, 4, 1, 0.25L});
        auto e = perturb::build_e(s, 1, 3);
        Real off = 0, on = 0;
        for (const auto& r : perturb::residuals(s, e)) {
            Real& slot = perturb::is_boundary_index(e, r.j) ? on : off;
            slot = std::max(slot, std::fabs(r.value));
        }
        Real d1 = std::fabs(e.at(-1) - 5.25L), d2 = std::fabs(e.at(-2) - 4.2L), d3 = std::fabs(e.at(-3));
        Real dt = std::fabs(e.tau - 80 / 5.25L);
        c.measured = {{"e_-1", rounded(e.at(-1))}, {"e_-2", rounded(e.at(-2))}, {"e_-3", rounded(e.at(-3))},
                      {"tau", rounded(e.tau)},     {"max_residual_off_boundary", rounded(off)},
                      {"max_residual_on_boundary", rounded(on)}};
        c.bound.update({{"e_-1", 5.25}, {"e_-2", 4.2}, {"e_-3", 0}, {"tau", rounded(80 / 5.25L)}, {"tol", 1e-12}});
        c.pass = d1 <= 1e-12L && d2 <= 1e-12L && d3 <= 1e-12L && dt <= 1e-12L && off <= 1e-12L &&
                 std::fabs(e.tau - 15.2381L) < 1e-4L;
    }));

    if (want(2)) add(run_check(2, "epsilon0_formula", "eps0 = 1/(C(1+C'))", 1, [](Check& c) {
        Real toy = perturb::epsilon0(2, 3);
        Real Cp = perturb::forward_sum(perturb::schedule_from_c(-3, {64, 16, 4, 1, 0.25L}));
        Real measured = perturb::epsilon0(2, Cp);
        c.measured = {{"eps0_C2_Cp3", rounded(toy)}, {"C_prime", rounded(Cp)}, {"eps0", rounded(measured)}};
        c.bound.update({{"eps0_C2_Cp3", 0.125}, {"eps0", rounded(1 / (2 * (1 + Cp)))}});
        c.pass = toy == 0.125L && measured == 1 / (2 * (1 + Cp));
    }));

    if (want(3)) add(run_check(3, "derivative_drop", "Dg(x) - Df(x) = -b0/(1+e0) < -eps0", 30, [&](Check& c) {
        const auto& r = p.step().report;
        Real dev = std::fabs(r.drop - r.drop_predicted);
        Real pred = -r.b0 / (1 + r.e0);
        c.measured = {{"drop", rounded(r.drop)}, {"predicted", rounded(r.drop_predicted)},
                      {"deviation", rounded(dev)}, {"eps0", rounded(r.eps0)}};
        c.bound.update({{"deviation", 1e-9}, {"drop_below", rounded(-r.eps0)}});
        c.pass = dev <= 1e-9L && r.drop < -r.eps0 && std::fabs(pred - r.drop_predicted) <= 1e-15L;
    }));

    if (want(4)) add(run_check(4, "symmetric_sum_c1_closeness", "g + g^-1 is eps-close to f + f^-1 in C1", 60, [&](Check& c) {
        const auto& r = p.step().report;
        c.measured = {{"c1_distance", rounded(r.c1_distance)}, {"grid", cfg.tol.grid}};
        c.bound.update({{"epsilon", rounded(r.epsilon)}});
        c.pass = r.c1_distance < r.epsilon;
        if (!c.pass) {
            std::ostringstream os;
            os << "the derivative drop at x alone is " << rounded(-r.drop) << " = b0/(1+e0) with e0 = "
               << rounded(r.e0) << "; e0 is large because the window smallness is " << rounded(cfg.scheme.step.smallness)
               << " (the finite-stage cocycle is bounded, so smaller c thresholds admit no windows)";
            c.note = os.str();
        }
    }));

    if (want(5)) add(run_check(5, "nondifferentiability_probe", "Delta(g, y, u, v) > 1 + eps0 (margin 1/4)", 120, [&](Check& c) {
        const auto& pr = p.step().report.probe;
        const auto& sc = p.scheme();
        json fin = json::array();
        bool all = sc.final_probes.size() == static_cast<std::size_t>(cfg.scheme.stages);
        Real worst_ratio = INFINITY;
        for (const auto& q : sc.final_probes) {
            bool ok = q.found && q.distortion > q.threshold;
            all = all && ok;
            worst_ratio = std::min(worst_ratio, (q.distortion - 1) / (q.threshold - 1));
            fin.push_back({{"u", rounded(q.u)}, {"v", rounded(q.v)}, {"distortion", rounded(q.distortion)},
                           {"threshold", rounded(q.threshold)}, {"pass", ok}});
        }
        c.proxy = true;
        c.measured = {{"step_distortion", rounded(pr.distortion)}, {"step_u", rounded(pr.u)},
                      {"step_v", rounded(pr.v)}, {"final_probes", fin}};
        c.bound.update({{"step_threshold", rounded(pr.threshold)}, {"stages", cfg.scheme.stages}});
        c.pass = pr.found && pr.distortion > pr.threshold && all && sc.ok;
        worst_ratio = std::min(worst_ratio, (pr.distortion - 1) / (pr.threshold - 1));
        c.marginal = worst_ratio < 1 / 0.9;
    }));

    if (want(6)) add(run_check(6, "growth_at_k_points", "Phi_N(x) = 0 and Phi_N(x + N alpha) >= N^(2/3)/10", 10, [&](Check& c) {
        const auto& tree = p.tree();
        int depth = tree.depth();
        if (depth < 3) throw Error(ErrorKind::Precondition, "needs depth >= 3");
        json rows = json::array();
        bool ok = true;
        Real first = NAN;
        for (std::size_t idx = 0; idx < (std::size_t{1} << depth); ++idx) {
            auto w = minimal::Word::from_index(static_cast<std::size_t>(depth), idx);
            for (const auto& g : minimal::growth_table(tree, w, cfg.minimal.quad_tol)) {
                if (g.N > 3) continue;
                bool row_ok = g.at_point == 0 && g.shifted >= 0.1L * std::pow(Real(g.N), Real(2) / 3);
                ok = ok && row_ok;
                if (idx == 0 && g.N == 1) first = g.shifted;
                if (idx == 0)
                    rows.push_back({{"N", g.N}, {"phi_at_point", rounded(g.at_point)},
                                    {"phi_shifted", rounded(g.shifted)}, {"bound", rounded(g.bound)}});
            }
        }
        Real target = std::pow(Real(2), Real(-4) / 3);
        c.measured = {{"word", std::string(static_cast<std::size_t>(depth), 'l')}, {"rows", rows},
                      {"words_checked", 1 << depth}, {"N1_value", rounded(first)}};
        c.bound.update({{"N1_value", rounded(target)}, {"tol", 1e-12}});
        c.pass = ok && std::fabs(first - target) <= 1e-12L;
    }));

    if (want(7)) add(run_check(7, "log_derivative_identity", "ln Df(h(y)) = Phi(y + alpha) - Phi(y)", 10, [&](Check& c) {
        const auto& st = p.construction().stage;
        auto ys = seeded_points(cfg.tol.check_points, cfg.seed + 7);
        Real err = minimal::log_derivative_identity_error(st, p.tree().alpha(), ys);
        c.measured = {{"max_error", rounded(err)}, {"points", ys.size()}, {"stage", st.N}};
        c.bound.update({{"max_error", 1e-8}});
        c.pass = err <= 1e-8L;
    }));

    if (want(8)) add(run_check(8, "normalization", "xi close to 1, h(1) - h(0) = 1", 10, [&](Check& c) {
        const auto& st = p.construction().stage;
        Real dev = std::fabs(st.xi.deviation());
        Real period = std::fabs(st.h(1) - st.h(0) - 1);
        c.measured = {{"xi", rounded(st.xi.xi)}, {"xi_deviation", rounded(dev)}, {"h_period_error", rounded(period)}};
        c.bound.update({{"xi_deviation", 0.05}, {"h_period_error", 1e-9}});
        c.pass = dev < 0.05L && period <= 1e-9L;
    }));

    std::optional<TwistArtifacts> stage_twist;
    if (want(9)) add(run_check(9, "rotation_number", "rotation number is a conjugacy invariant", 30, [&](Check& c) {
        const auto& f = p.construction().stage.f;
        Real alpha = p.tree().alpha();
        long n = cfg.tol.rotation_iterations;
        Real rf = rotation_number(f, 0, n).value;
        stage_twist = twist_artifacts(f, cfg);
        Real rg = stage_twist->conjugacy.rotation_on_graph;
        Real gap = std::max(std::fabs(rf - alpha), std::fabs(rg - alpha));
        c.proxy = true;
        c.measured = {{"alpha", rounded(alpha)}, {"rotation_f", rounded(rf)}, {"rotation_on_graph", rounded(rg)},
                      {"iterations", n}, {"max_gap", rounded(gap)}};
        c.bound.update({{"max_gap", 1e-3}});
        c.pass = gap <= 1e-3L && n >= 10000;
        c.marginal = near_upper(static_cast<double>(gap), 1e-3);
    }));

    if (want(10)) add(run_check(10, "twist_map_suite", "area-preserving unit twist with invariant graph of f - id", 30, [&](Check& c) {
        if (!stage_twist) stage_twist = twist_artifacts(p.construction().stage.f, cfg);
        json per = json::array();
        bool ok = true;
        auto judge = [&](const std::string& name, const TwistArtifacts& t) {
            bool good = t.determinant.closed_form_max_dev <= 1e-15L && t.determinant.numeric_max_dev <= 1e-6L &&
                        t.twist.ok && t.invariance <= 1e-9L && t.conjugacy.projection_error <= 1e-10L;
            ok = ok && good;
            per.push_back({{"map", name},
                           {"det_closed_form_dev", rounded(t.determinant.closed_form_max_dev)},
                           {"det_numeric_dev", rounded(t.determinant.numeric_max_dev)},
                           {"twist_fd_min", rounded(t.twist.fd_twist_min)},
                           {"twist_fd_max", rounded(t.twist.fd_twist_max)},
                           {"invariance_residual", rounded(t.invariance)},
                           {"projection_error", rounded(t.conjugacy.projection_error)},
                           {"pass", good}});
        };
        judge("stage_map", *stage_twist);
        PipelineConfig light = cfg;
        light.tol.rotation_iterations = 100;  // rotation on the graph is criterion 9
        judge("perturbed_map", twist_artifacts(p.final_map(), light));
        c.measured = {{"maps", per}};
        c.bound.update({{"det_numeric_dev", 1e-6}, {"twist_fd_dev", 1e-9}, {"invariance_residual", 1e-9},
                        {"projection_error", 1e-10}});
        c.pass = ok;
    }));

    if (want(11)) add(run_check(11, "cgood_proxies", "forward inverse-square sum bounded, backward cocycle unbounded", 10,
                  [&](Check& c) {
        auto prof = cgood_profile(p.base_map(), p.base_point(), 200);
        Real inc = 0;
        for (std::size_t n = 101; n < prof.s_plus_partial.size(); ++n)
            inc = std::max(inc, prof.s_plus_partial[n] - prof.s_plus_partial[n - 1]);
        c.proxy = true;
        c.measured = {{"s_plus_200", rounded(prof.s_plus)}, {"max_increment_past_100", rounded(inc)},
                      {"m_minus_200", rounded(prof.m_minus)}, {"s_minus_200", rounded(prof.s_minus)}};
        c.bound.update({{"max_increment_past_100", 1e-6}, {"m_minus_200_above", 10}});
        c.pass = inc < 1e-6L && prof.m_minus > 10;
        c.marginal = near_upper(static_cast<double>(inc), 1e-6) || near_lower(static_cast<double>(prof.m_minus), 10);
        if (!c.pass)
            c.note = "on a finite stage Df^n(x) = exp(Phi(y + n alpha) - Phi(y)) is bounded and equals 1 once "
                     "y + n alpha leaves the support of Phi, so S+ grows linearly and M- stays bounded";
    }));

    if (want(12)) add(run_check(12, "oracle_cross_checks", "finite differences, raw Delta, defect candidates", 60, [&](Check& c) {
        auto xs = seeded_points(cfg.tol.fd_points, cfg.seed + 12);
        const auto& st = p.construction().stage;
        const auto& sr = p.step();
        const Lift& F = p.final_map();
        json fd = json::object();
        Real worst = 0;
        auto note = [&](const std::string& k, Real v) {
            fd[k] = rounded(v);
            worst = std::max(worst, v);
        };
        note("f_stage", fd_error(jet_of(st.f), xs));
        note("h_stage", fd_error(jet_of(st.h), xs));
        note("f_base", fd_error(jet_of(p.base_map()), xs));
        note("g_step", fd_error(jet_of(sr.g), xs));
        note("F_final", fd_error(jet_of(F), xs));
        note("defect_stage", fd_error(twist::build_defect(st.f).eval, xs));
        note("symmetric_sum_step", fd_error(sym_sum(sr.g).eval, xs));

        Real delta_dev = 0;
        std::vector<perturb::ProbeResult> probes = p.scheme().final_probes;
        probes.push_back(sr.report.probe);
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const auto& q = probes[i];
            const Lift& map = i + 1 == probes.size() ? sr.g : F;
            Real fx = map(q.x);
            Real raw = (q.v / q.u) * (map(q.x + q.u) - fx) / (map(q.x + q.v) - fx);
            delta_dev = std::max(delta_dev, std::fabs(raw - q.raw));
        }
        auto gd = twist::graph_diagnostics(twist::InvariantGraph(F), p.scheme().final_probes);
        delta_dev = std::max(delta_dev, gd.probe_max_dev);

        if (!stage_twist) stage_twist = twist_artifacts(st.f, cfg);
        Real good = stage_twist->invariance, half = stage_twist->invariance_half;
        Real orders = std::log10(half / std::max(good, Real(1e-30)));
        c.measured = {{"fd_max_error", fd},
                      {"delta_recompute_dev", rounded(delta_dev)},
                      {"invariance_corrected", rounded(good)},
                      {"invariance_half", rounded(half)},
                      {"orders_of_magnitude", rounded(orders)},
                      {"graph_lipschitz", rounded(gd.lipschitz)}};
        c.bound.update({{"fd_max_error", 1e-4}, {"delta_recompute_dev", 1e-12}, {"orders_of_magnitude", 6}});
        c.pass = worst <= 1e-4L && delta_dev <= 1e-12L && orders >= 6;
    }));

    return rep;
}

}  // namespace cgreat::app
