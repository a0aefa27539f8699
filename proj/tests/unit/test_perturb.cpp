#include <doctest.h>

#include <cmath>

#include "cgreat/core/nodes.hpp"
#include "cgreat/perturb/scheme.hpp"
#include "cgreat/minimal/construct.hpp"
#include "test_support.hpp"

using namespace cgreat;
using namespace cgreat::perturb;

namespace {

struct DepthTwo {
    minimal::IntervalTree tree = minimal::build_tree(minimal::RotationNumber{}, {10, 14, 18, 24}, 3);
    minimal::Stage stage = minimal::build_stage(tree, 2);
    Real x = stage.h(minimal::k_point(tree, minimal::Word{"ll"}));
};

const DepthTwo& depth_two() {
    static DepthTwo d;
    return d;
}

StepConfig relaxed() {
    StepConfig cfg;
    cfg.smallness = 2;
    cfg.largeness = 5;
    cfg.epsilon = 1;
    cfg.require_cgood = false;
    cfg.require_closeness = false;
    cfg.identity_samples = 200;
    cfg.c1_grid = 2000;
    cfg.transfer.samples = 8;
    return cfg;
}

const StepResult& depth_two_step() {
    static StepResult r = apply_step(depth_two().stage.f, depth_two().x, relaxed());
    return r;
}

CocycleSchedule toy() { return schedule_from_c(-3, {64, 16, 4, 1, 0.25L}); }

}  // namespace

TEST_CASE("schedule of a rotation") {
    CocycleSchedule s = compute_schedule(Lift::rotation(testing::golden()), 0.1L, 20);
    for (Real b : s.b.v) CHECK(b == 1);
    for (Real c : s.c.v) CHECK(c == 1);
    CHECK(s.c.lo == -20);
    CHECK(s.b.lo == -21);
}

TEST_CASE("schedule with constant derivative two") {
    CocycleSchedule s = schedule_from_b(10, std::vector<Real>(23, 2));
    CHECK(s.c.at(0) == 1);
    for (long j = 0; j <= 10; ++j) CHECK(s.c.at(j) == std::pow(4.0L, -j));
    CHECK(s.c.at(-1) == 4);
    CHECK(s.c.at(-2) == 16);
    CHECK_THROWS_AS(choose_windows(s, 0.01L, 5), Error);
    try {
        choose_windows(s, 0.01L, 5);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HorizonExhausted);
    }
}

TEST_CASE("schedule recurrence on a smooth map") {
    CocycleSchedule s = compute_schedule(testing::smooth_circle_map(), 0.3L, 50);
    CHECK(recurrence_error(s) < 1e-12L);
    CHECK(s.c.at(0) == 1);
    for (long j = -49; j <= 50; ++j) CHECK(s.points.at(j) == doctest::Approx(static_cast<double>(testing::smooth_circle_map()(s.points.at(j - 1)))));
}

TEST_CASE("window selection") {
    std::vector<Real> c;
    long H = 200;
    for (long j = -H; j <= H; ++j) c.push_back(j >= -4 ? std::pow(4.0L, -std::labs(j)) : Real(0.02));
    CocycleSchedule s = schedule_from_c(-H, c);
    Windows w = choose_windows(s, 0.05L, 1);
    CHECK(w.N == 3);
    CHECK(w.tau > 1);
    CHECK(tail_normalizer(s, w.N, w.N_prime - 1) <= 1);
    CHECK(s.c.at(-w.N_prime) < 0.05L);

    std::vector<Real> geo;
    for (long j = -H; j <= H; ++j) geo.push_back(std::pow(4.0L, -std::labs(j)));
    CHECK_THROWS_AS(choose_windows(schedule_from_c(-H, geo), 0.01L, 5), Error);
}

TEST_CASE("e staircase on the toy schedule") {
    CocycleSchedule s = toy();
    EStaircase e = build_e(s, 1, 3);
    CHECK(std::fabs(e.at(1) - 0.25L) < 1e-12L);
    CHECK(std::fabs(e.at(0) - 1.25L) < 1e-12L);
    CHECK(std::fabs(e.at(-1) - 5.25L) < 1e-12L);
    CHECK(std::fabs(e.tau - 80 / 5.25L) < 1e-12L);
    CHECK(std::fabs(e.tau - 15.2381L) < 1e-4L);
    CHECK(std::fabs(e.at(-2) - 4.2L) < 1e-12L);
    CHECK(std::fabs(e.at(-3)) < 1e-12L);
    CHECK(e.at(2) == 0);
    CHECK(e.sup_e == doctest::Approx(5.25));
    auto rs = residuals(s, e);
    bool saw_boundary = false;
    for (const auto& r : rs) {
        if (is_boundary_index(e, r.j)) {
            saw_boundary = saw_boundary || std::fabs(r.value) > 1e-6L;
        } else {
            CHECK(std::fabs(r.value) <= 1e-12L);
        }
    }
    CHECK(saw_boundary);
    CHECK_THROWS_AS(build_e(s, 1, 1), Error);
    CHECK_THROWS_AS(build_e(s, 1, 4), Error);
}

TEST_CASE("epsilon0") {
    CHECK(epsilon0(2, 3) == 0.125L);
    CHECK(epsilon0(2, forward_sum(toy())) == 1 / (2 * (1 + 1.25L)));
    CHECK_THROWS_AS(epsilon0(0, 1), Error);
}

TEST_CASE("linearizer of an affine orbit is the identity") {
    Lift r = Lift::rotation(testing::golden());
    CocycleSchedule s = compute_schedule(r, 0.1L, 30);
    Linearizer lin = build_linearizer(r, s, 1, 5, 0.01L);
    CHECK(lin.max_deriv_dev < 1e-15L);
    for (Real y : testing::random_points(50, 3)) CHECK(std::fabs(lin.h(y) - y) < 1e-15L);
    AffineCore core = select_affine_core(lin, s);
    CHECK(core.half_width == doctest::Approx(static_cast<double>(0.4L * lin.rho0)));
    CHECK(core.slope_error < 1e-15L);
}

TEST_CASE("bump conjugacy") {
    CocycleSchedule s = toy();
    EStaircase e = build_e(s, 1, 3);
    AffineCore core;
    for (long j = -3; j <= 2; ++j) core.intervals.push_back({0.1L * (j + 3) + 0.01L, 0.1L * (j + 3) + 0.03L});
    Lift h = build_bump_conjugacy(e, core, 3, 0.05L);
    for (long j = -2; j <= 1; ++j) {
        const Interval& iv = core.intervals[static_cast<std::size_t>(j + 3)];
        CHECK(std::fabs(h(iv.lo) - iv.lo) < 1e-15L);
        CHECK(std::fabs(h(iv.hi) - iv.hi) < 1e-15L);
        CHECK(std::fabs(h(iv.center()) - iv.center()) < 1e-15L);
        CHECK(std::fabs(h.deriv(iv.center()) - (1 + e.at(j))) < 1e-12L);
    }
    CHECK(h(0.55L) == 0.55L);

    EStaircase zero = e;
    for (Real& v : zero.e.v) v = 0;
    zero.sup_e = 0;
    CHECK(build_bump_conjugacy(zero, core, 3, 0.05L).kind() == NodeKind::Rotation);
    CHECK_THROWS_AS(build_bump_conjugacy(e, core, 3, 0.2L), Error);
}

TEST_CASE("probe on a smooth map") {
    Lift f = testing::smooth_circle_map();
    ProbeResult p = find_uv(f, 0.3L, 1e-6L, 1e-6L, 0.1L, 0.25L, 1e-3L);
    CHECK_FALSE(p.found);
    CHECK(std::fabs(p.distortion - 1) < 1e-3L);
    CHECK(p.threshold == doctest::Approx(1.025));
    for (const auto& d : p.scan) CHECK(d.u < d.v);
}

TEST_CASE("apply_step on the depth-two construction") {
    const StepResult& r = depth_two_step();
    const StepReport& rep = r.report;
    CHECK(rep.windows.N >= 1);
    CHECK(rep.windows.N_prime > rep.windows.N);
    CHECK(rep.windows.tau > 5);
    CHECK(rep.recurrence_error < 1e-12L);
    CHECK(std::fabs(rep.drop - rep.drop_predicted) <= 1e-9L);
    CHECK(rep.drop < -rep.eps0);
    CHECK(rep.identity_error < 1e-8L);
    CHECK(rep.outside_mismatch <= 1e-12L);
    CHECK(rep.fixed_point_displacement <= 1e-10L);
    CHECK(rep.linearizer_deriv_dev < rep.delta);
    CHECK(rep.core_slope_error < 1e-9L);
    CHECK(rep.c0_ok);
    CHECK(rep.probe.found);
    CHECK(rep.probe.u < rep.probe.v);
    CHECK(std::fabs(rep.probe.distortion - (1 + rep.e0) / (1 + r.e.at(1))) < 0.05L);
    CHECK_FALSE(rep.transfer.base_point_avoids);
    CHECK(rep.transfer.conjugacy_deriv_max <= rep.transfer.conjugacy_deriv_bound);
    CHECK(rep.transfer.max_cocycle_mismatch < 1e-9L);
    CHECK(certify(r.g, 2000).ok);

    // arithmetic of the predicted drop
    CHECK(std::fabs(-1.2L / (1 + 1.25L) + 0.533333333333L) < 1e-11L);

    auto j = to_json(rep);
    CHECK(j.contains("probe"));
    CHECK(j["N_prime"] == rep.windows.N_prime);
}

TEST_CASE("apply_step preconditions") {
    StepConfig strict = relaxed();
    strict.require_cgood = true;
    CHECK_THROWS_AS(apply_step(depth_two().stage.f, depth_two().x, strict), Error);
    StepConfig close = relaxed();
    close.require_closeness = true;
    close.epsilon = 1e-2L;
    try {
        apply_step(depth_two().stage.f, depth_two().x, close);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::ClosenessFailure);
    }
}

TEST_CASE("scheme base cases") {
    SchemeConfig cfg;
    cfg.step = relaxed();
    cfg.stages = 0;
    SchemeResult r0 = scheme_iterate(depth_two().stage.f, depth_two().x, cfg);
    CHECK(r0.probes.empty());
    CHECK(r0.F.node_ptr() == depth_two().stage.f.node_ptr());

    cfg.stages = 1;
    SchemeResult r1 = scheme_iterate(depth_two().stage.f, depth_two().x, cfg);
    REQUIRE(r1.probes.size() == 1);
    CHECK(r1.ok);
    CHECK(r1.probes[0].u == depth_two_step().report.probe.u);
    CHECK(r1.F(0.37L) == depth_two_step().g(0.37L));
}
