#include "cgreat/minimal/construct.hpp"

#include <algorithm>
#include <cmath>

#include "cgreat/core/json_util.hpp"
#include "cgreat/core/nodes.hpp"

namespace cgreat::minimal {

std::vector<BumpTerm> level_terms(const IntervalTree& tree, int n, Real weight) {
    if (n < 0 || n > tree.depth()) throw Error(ErrorKind::Precondition, "level outside tree depth");
    std::vector<BumpTerm> out;
    const auto& ivs = tree.level(n);
    for (std::size_t i = 0; i < ivs.size(); ++i) {
        for (int k = 1; k <= 2 * n - 1; ++k) {
            BumpTerm t;
            t.center = frac(ivs[i].center() + k * tree.alpha());
            t.length = ivs[i].width();
            t.amplitude = weight * static_cast<Real>(n - std::abs(n - k));
            t.level = n;
            t.shift = k;
            t.word = Word::from_index(static_cast<std::size_t>(n), i).digits;
            out.push_back(t);
        }
    }
    return out;
}

BumpPotential phi_level(const IntervalTree& tree, int n) { return BumpPotential(level_terms(tree, n)); }

Real level_support_gap(const IntervalTree& tree, int n) {
    auto terms = level_terms(tree, n);
    Real gap = INFINITY;
    for (std::size_t a = 0; a < terms.size(); ++a)
        for (std::size_t b = a + 1; b < terms.size(); ++b) {
            Real d = std::fabs(wrap(terms[a].center - terms[b].center));
            gap = std::min(gap, d - (terms[a].length + terms[b].length) / 2);
        }
    return gap;
}

StagePotential::StagePotential(const IntervalTree& tree, int N, Real quad_tol) : N_(N), quad_tol_(quad_tol) {
    if (N < 0 || N > tree.depth()) throw Error(ErrorKind::Precondition, "stage outside tree depth");
    if (!(quad_tol > 0)) throw Error(ErrorKind::Precondition, "quadrature tolerance must be positive");
    std::vector<BumpTerm> terms;
    for (int n = 0; n <= N; ++n) {
        Real w = std::pow(static_cast<Real>(n + 1), Real(-4) / 3);
        weights_.push_back(w);
        auto lv = level_terms(tree, n, w);
        terms.insert(terms.end(), lv.begin(), lv.end());
    }
    // every term contributes at most four cuts; split the budget over segments
    Real per_segment = quad_tol / static_cast<Real>(4 * terms.size() + 2);
    phi_ = std::make_shared<const BumpPotential>(std::move(terms), per_segment);
}

Real StagePotential::weight(int n) const { return weights_.at(static_cast<std::size_t>(n)); }

StagePotential build_potential(const IntervalTree& tree, int N, Real quad_tol) {
    return StagePotential(tree, N, quad_tol);
}

Normalizer normalizer(const StagePotential& phi) {
    Normalizer out;
    out.xi = 1 + phi.potential()->total_excess();
    out.error_bound = phi.potential()->is_zero() ? 0 : phi.quadrature_tolerance();
    return out;
}

Lift build_h(const StagePotential& phi, const Normalizer& xi) {
    if (!(xi.xi > 0)) throw Error(ErrorKind::Precondition, "normalizer must be positive");
    if (phi.potential()->is_zero()) return Lift::identity();
    Lift h(std::make_shared<DensityNode>(phi.potential(), xi.xi));
    Real mass = h(1) - h(0);
    if (std::fabs(mass - 1) > 1e-9L)
        throw Error(ErrorKind::Quadrature, "density does not integrate to one");
    return h;
}

Lift build_f(const Lift& h, Real alpha) {
    if (h.kind() == NodeKind::Rotation) return Lift::rotation(alpha);
    return Lift::conjugate(h, Lift::rotation(alpha));
}

Real k_point(const IntervalTree& tree, const Word& w) { return tree.interval(w).center(); }

std::vector<GrowthRow> growth_table(const IntervalTree& tree, const Word& w, Real quad_tol) {
    Real x = k_point(tree, w);
    std::vector<GrowthRow> rows;
    for (int N = 1; N <= tree.depth(); ++N) {
        StagePotential phi(tree, N, quad_tol);
        GrowthRow r;
        r.N = N;
        r.at_point = phi.value(frac(x));
        r.shifted = phi.value(frac(x + N * tree.alpha()));
        r.bound = Real(0.1) * std::pow(static_cast<Real>(N), Real(2) / 3);
        r.ok = r.at_point == 0 && r.shifted >= r.bound;
        rows.push_back(r);
    }
    return rows;
}

Stage build_stage(const IntervalTree& tree, int N, Real quad_tol) {
    Stage s;
    s.N = N;
    s.potential = std::make_shared<const StagePotential>(tree, N, quad_tol);
    s.xi = normalizer(*s.potential);
    s.h = build_h(*s.potential, s.xi);
    s.f = build_f(s.h, tree.alpha());
    return s;
}

Real log_derivative_identity_error(const Stage& stage, Real alpha, const std::vector<Real>& ys) {
    Real worst = 0;
    for (Real y : ys) {
        Real lhs = std::log(stage.f.deriv(stage.h(y)));
        Real rhs = stage.potential->value(frac(y + alpha)) - stage.potential->value(frac(y));
        worst = std::max(worst, std::fabs(lhs - rhs));
    }
    return worst;
}

CGoodCertificate cgood_certificate(const Stage& stage, const IntervalTree& tree, const Word& w,
                                   long horizon, Real C, Real growth_threshold) {
    CGoodCertificate out;
    Real y = k_point(tree, w);
    out.x = stage.h(y);
    out.profile = cgood_profile(stage.f, out.x, horizon);
    out.verdict = is_cgood_proxy(out.profile, C, growth_threshold);

    OrbitSegment fwd = iterate(stage.f, out.x, 0, horizon);
    Real sxx = 0, sxy = 0;
    for (long n = 1; n <= horizon; ++n) {
        Real t = std::pow(static_cast<Real>(n), Real(2) / 3);
        sxx += t * t;
        sxy += t * std::log(fwd.deriv(n));
    }
    out.growth_exponent = sxx > 0 ? sxy / sxx : 0;

    for (long n = 1; n < horizon; ++n)
        out.max_backward_potential =
            std::max(out.max_backward_potential, stage.potential->value(frac(y - n * tree.alpha())));

    for (int N = 1; N <= stage.N && N <= horizon; ++N) {
        out.forward_log_bound.push_back(Real(0.1) * std::pow(static_cast<Real>(N), Real(2) / 3) -
                                        std::log(stage.xi.xi));
        out.forward_log_value.push_back(std::log(fwd.deriv(N)));
    }
    return out;
}

namespace {

std::vector<Real> circle_gaps(std::vector<Real> pts) {
    for (Real& p : pts) p = frac(p);
    std::sort(pts.begin(), pts.end());
    std::vector<Real> gaps;
    for (std::size_t i = 1; i < pts.size(); ++i) gaps.push_back(pts[i] - pts[i - 1]);
    gaps.push_back(pts.front() + 1 - pts.back());
    return gaps;
}

std::size_t distinct_lengths(std::vector<Real> gaps, Real tol) {
    std::sort(gaps.begin(), gaps.end());
    std::size_t count = 0;
    Real last = -1;
    for (Real g : gaps)
        if (count == 0 || g - last > tol) {
            ++count;
            last = g;
        }
    return count;
}

}  // namespace

MinimalityProxy minimality_proxy(const Stage& stage, Real alpha, long n) {
    if (n < 3) throw Error(ErrorKind::Precondition, "orbit too short");
    MinimalityProxy out;
    out.orbit_length = n;
    Real x0 = 0;
    std::vector<Real> orbit{x0}, rigid;
    Real x = x0;
    for (long k = 1; k < n; ++k) orbit.push_back(x = stage.f(x));
    out.rotation = (stage.f(x) - x0) / static_cast<Real>(n);
    out.rotation_error = std::fabs(out.rotation - alpha);

    Real y0 = stage.h.solve(x0);
    for (long k = 0; k < n; ++k) rigid.push_back(y0 + k * alpha);

    auto gaps = circle_gaps(orbit);
    auto rgaps = circle_gaps(rigid);
    out.max_gap = *std::max_element(gaps.begin(), gaps.end());
    out.min_gap = *std::min_element(gaps.begin(), gaps.end());
    out.rotation_max_gap = *std::max_element(rgaps.begin(), rgaps.end());
    out.rotation_min_gap = *std::min_element(rgaps.begin(), rgaps.end());

    Real lo = INFINITY, hi = 0;
    for (Real s : sample_points({&stage.h}, 10000, 16)) {
        Real d = stage.h.deriv(s);
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    out.distortion = hi / lo;

    // each gap endpoint carries one inversion error
    const Real slack = 4 * InvertOptions{}.tol;
    bool three_gaps = distinct_lengths(rgaps, 1e-12L) <= 3;
    out.ok = out.rotation_error <= 1e-3L && three_gaps &&
             out.max_gap <= hi * out.rotation_max_gap + slack &&
             out.min_gap >= lo * out.rotation_min_gap - slack;
    return out;
}

std::vector<Real> stage_c0_distances(const IntervalTree& tree, Real quad_tol) {
    std::vector<Real> out;
    Stage prev = build_stage(tree, 0, quad_tol);
    for (int N = 1; N <= tree.depth(); ++N) {
        Stage next = build_stage(tree, N, quad_tol);
        out.push_back(c0_distance(prev.h, next.h, 2000, 32));
        prev = std::move(next);
    }
    return out;
}

Construction construct(const MinimalConfig& cfg) {
    IntervalTree tree = cfg.depth == 0 ? IntervalTree(cfg.alpha, cfg.m_seq, 0, cfg.tree)
                                       : build_tree_escalating(cfg.alpha, cfg.m_seq, cfg.depth, cfg.m_cap, cfg.tree);
    Stage stage = build_stage(tree, cfg.depth, cfg.quad_tol);
    return Construction{std::move(tree), std::move(stage)};
}

nlohmann::json build_report(const Construction& c) {
    using nlohmann::json;
    json rec = json::array();
    for (const auto& r : c.tree.recurrence())
        rec.push_back({{"level", r.level}, {"k_max", r.k_max}, {"capped", r.capped},
                       {"min_clearance", rounded(r.min_clearance)}});
    json growth = json::array();
    if (c.tree.depth() >= 1) {
        Word w{std::string(static_cast<std::size_t>(c.tree.depth()), 'l')};
        for (const auto& g : growth_table(c.tree, w, c.stage.potential->quadrature_tolerance()))
            growth.push_back({{"N", g.N}, {"phi_at_point", rounded(g.at_point)},
                              {"phi_shifted", rounded(g.shifted)}, {"bound", rounded(g.bound)}, {"ok", g.ok}});
    }
    json gaps = json::array();
    for (int n = 1; n <= c.tree.depth(); ++n) gaps.push_back(rounded(level_support_gap(c.tree, n)));
    return {{"alpha", rounded(c.tree.alpha())},
            {"alpha_coefficients", c.tree.rotation().coefficients},
            {"depth", c.tree.depth()},
            {"m_seq", c.tree.m_seq()},
            {"xi", rounded(c.stage.xi.xi)},
            {"xi_deviation", rounded(c.stage.xi.deviation())},
            {"xi_error_bound", rounded(c.stage.xi.error_bound)},
            {"recurrence", rec},
            {"level_support_gaps", gaps},
            {"growth", growth}};
}

}  // namespace cgreat::minimal
