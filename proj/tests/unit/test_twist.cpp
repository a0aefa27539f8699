#include <doctest.h>

#include <cmath>

#include "cgreat/minimal/construct.hpp"
#include "cgreat/twist/twist_map.hpp"
#include "test_support.hpp"

using namespace cgreat;
using namespace cgreat::twist;

namespace {

const minimal::Stage& stage_map() {
    static minimal::IntervalTree tree = minimal::build_tree(minimal::RotationNumber{}, {10, 14, 18, 24}, 3);
    static minimal::Stage s = minimal::build_stage(tree, 2);
    return s;
}

std::vector<Real> grid(std::size_t n) {
    std::vector<Real> t;
    for (std::size_t i = 0; i < n; ++i) t.push_back((i + 0.5L) / n);
    return t;
}

}  // namespace

TEST_CASE("defect of a rotation vanishes") {
    Function1D phi = build_defect(Lift::rotation(testing::golden()));
    for (Real x : grid(50)) {
        CHECK(std::fabs(phi.value(x)) < 1e-15L);
        CHECK(std::fabs(phi(x).deriv) < 1e-15L);
    }
    TwistMap g(Lift::rotation(0.3L));
    AnnulusPoint p = g.apply_lift({0.2L, 0.7L});
    CHECK(p.theta == doctest::Approx(0.9));
    CHECK(p.r == doctest::Approx(0.7));
    AnnulusPoint q = g.apply({0.6L, 0.7L});
    CHECK(q.theta == doctest::Approx(0.3));
    Matrix2 m = g.jacobian({0.1L, 0.2L});
    CHECK(m.a == 1);
    CHECK(m.b == 1);
    CHECK(std::fabs(m.c) < 1e-15L);
    CHECK(std::fabs(m.d - 1) < 1e-15L);
}

TEST_CASE("defect periodicity and derivative") {
    Function1D phi = build_defect(stage_map().f);
    for (Real x : testing::random_points(1000, 11)) CHECK(std::fabs(phi.value(x + 1) - phi.value(x)) <= 1e-12L);
    Real eta = 1e-6L;
    for (Real x : testing::random_points(100, 12)) {
        Real fd = (phi.value(x + eta) - phi.value(x - eta)) / (2 * eta);
        CHECK(std::fabs(fd - phi(x).deriv) < 1e-4L);
    }
}

TEST_CASE("invariance oracle selects the corrected defect") {
    const Lift& f = stage_map().f;
    InvariantGraph graph(f);
    auto thetas = grid(1000);
    Real good = invariance_residual(TwistMap(f), graph, thetas);
    Real half = invariance_residual(TwistMap(f, DefectForm::Half), graph, thetas);
    CHECK(good <= 1e-10L);
    CHECK(half > 0.1L);
    CHECK(half > 1e6L * std::max(good, Real(1e-18)));
    CHECK(invariance_residual(TwistMap(Lift::rotation(0.3L)), InvariantGraph(Lift::rotation(0.3L)), thetas) < 1e-12L);
}

TEST_CASE("area preservation and twist") {
    TwistMap g(stage_map().f);
    std::vector<AnnulusPoint> pts;
    auto th = testing::random_points(1000, 21);
    auto rs = testing::random_points(1000, 22, -2, 2);
    for (std::size_t i = 0; i < th.size(); ++i) pts.push_back({th[i], rs[i]});
    DeterminantReport d = determinant_check(g, pts);
    CHECK(d.closed_form_max_dev <= 1e-15L);
    CHECK(d.numeric_max_dev <= 1e-6L);
    CHECK(d.fd_entry_max_dev <= 1e-4L);

    TwistReport t = twist_check(g, testing::random_points(20, 23));
    CHECK(t.ok);
    CHECK(t.monotone);
    CHECK(t.points == 20 * 41);
    CHECK_THROWS_AS(twist_check(g, {0.1L}, 1, 1), Error);
}

TEST_CASE("restricted dynamics") {
    Real a = testing::golden();
    TwistMap rg(Lift::rotation(a));
    InvariantGraph rgraph(Lift::rotation(a));
    AnnulusPoint p = rg.apply_lift({0.25L, rgraph.psi(0.25L)});
    CHECK(std::fabs(p.theta - (0.25L + a)) < 1e-15L);

    const Lift& f = stage_map().f;
    ConjugacyReport c = restricted_conjugacy_check(TwistMap(f), InvariantGraph(f), grid(1000), 0.1L, 10000);
    CHECK(c.ok);
    CHECK(c.projection_error <= 1e-10L);
    CHECK(c.rotation_gap <= 2e-4L);
    CHECK(std::fabs(c.rotation_on_graph - a) < 1e-3L);
    CHECK_THROWS_AS(restricted_conjugacy_check(TwistMap(f), InvariantGraph(f), {}, 0, 0), Error);
}

TEST_CASE("graph diagnostics") {
    GraphDiagnostics r = graph_diagnostics(InvariantGraph(Lift::rotation(0.3L)), {});
    CHECK(r.lipschitz < 1e-12L);
    CHECK(r.levels.size() == 5);

    const Lift& f = stage_map().f;
    perturb::ProbeResult probe;
    probe.x = 0.3L;
    probe.u = 1e-4L;
    probe.v = 1e-2L;
    probe.raw = delta_stat(f, probe.x, probe.u, probe.v).value;
    GraphDiagnostics d = graph_diagnostics(InvariantGraph(f), {probe});
    CHECK(std::isfinite(static_cast<double>(d.lipschitz)));
    CHECK(d.refinement_spread <= 0.2L);
    CHECK(d.lipschitz >= d.levels.back().max_slope);
    CHECK(d.probe_max_dev <= 1e-12L);
    CHECK_THROWS_AS(graph_diagnostics(InvariantGraph(f), {}, 5, 4), Error);
}

TEST_CASE("defect derivative distance equals symmetric sum distance") {
    const Lift& f = stage_map().f;
    Lift g = testing::smooth_circle_map();
    Function1D pf = build_defect(f), pg = build_defect(g);
    Function1D sf = sym_sum(f), sg = sym_sum(g);
    Real a = 0, b = 0;
    for (Real x : grid(2000)) {
        a = std::max(a, std::fabs(pf(x).deriv - pg(x).deriv));
        b = std::max(b, std::fabs(sf(x).deriv - sg(x).deriv));
    }
    CHECK(std::fabs(a - b) <= 1e-12L);
}

TEST_CASE("twist reports serialise") {
    TwistMap g(Lift::rotation(0.3L));
    auto j = to_json(twist_check(g, {0.5L}));
    CHECK(j["ok"] == true);
    CHECK(to_json(determinant_check(g, {{0.1L, 0.2L}})).contains("numeric_max_dev"));
}
