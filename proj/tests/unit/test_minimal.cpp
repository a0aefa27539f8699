#include <doctest.h>

#include <cmath>

#include "cgreat/core/orbit.hpp"
#include "cgreat/minimal/construct.hpp"
#include "test_support.hpp"

using namespace cgreat;
using namespace cgreat::minimal;

namespace {

const IntervalTree& default_tree() {
    static IntervalTree tree = build_tree(RotationNumber{}, {10, 14, 18, 24}, 3);
    return tree;
}

const Stage& depth_stage(int N) {
    static std::vector<Stage> stages = [] {
        std::vector<Stage> s;
        for (int n = 0; n <= 3; ++n) s.push_back(build_stage(default_tree(), n));
        return s;
    }();
    return stages.at(static_cast<std::size_t>(N));
}

}  // namespace

TEST_CASE("rotation number from continued fraction") {
    CHECK(RotationNumber{{1}}.value() == doctest::Approx(static_cast<double>(testing::golden())).epsilon(1e-15));
    CHECK(std::fabs(RotationNumber{{2}}.value() - (std::sqrt(2.0L) - 1)) < 1e-18L);
    CHECK(std::fabs(RotationNumber{{3, 1}}.value() - 1 / (3 + testing::golden())) < 1e-18L);
    auto q = RotationNumber{{1}}.convergent_denominators(6);
    CHECK(q == std::vector<long>{1, 1, 2, 3, 5, 8, 13});
    CHECK_THROWS_AS(RotationNumber{{0}}.value(), Error);
}

TEST_CASE("words") {
    CHECK(Word::from_string("lr").index() == 1);
    CHECK(Word::from_index(3, 6).digits == "rrl");
    CHECK_THROWS_AS(Word::from_string("lx"), Error);
}

TEST_CASE("interval tree geometry") {
    CHECK(left_point({0, 1}) == 0.375L);
    CHECK(right_point({0, 1}) == 0.625L);

    IntervalTree t = build_tree(RotationNumber{}, {10, 14}, 1);
    CHECK(t.interval(Word{}).lo == -std::ldexp(1.0L, -11));
    CHECK(t.interval(Word{}).hi == std::ldexp(1.0L, -11));
    CHECK(t.interval(Word{"l"}).center() == -std::ldexp(1.0L, -13));
    CHECK(k_point(t, Word{}) == 0);
    CHECK(k_point(t, Word{"l"}) == -std::ldexp(1.0L, -13));

    const auto& tree = default_tree();
    for (int n = 1; n <= tree.depth(); ++n) {
        const auto& lv = tree.level(n);
        for (std::size_t i = 0; i < lv.size(); ++i) {
            const Interval& parent = tree.level(n - 1)[i / 2];
            CHECK(lv[i].lo > parent.lo);
            CHECK(lv[i].hi < parent.hi);
            if (i % 2 == 1) CHECK(lv[i].lo > lv[i - 1].hi);
        }
    }
    CHECK_THROWS_AS(tree.interval(Word{"llll"}), Error);
}

TEST_CASE("interval tree preconditions") {
    CHECK_THROWS_AS(build_tree(RotationNumber{}, {10, 10}, 1), Error);
    CHECK_THROWS_AS(build_tree(RotationNumber{}, {10, 12}, 1), Error);  // siblings touch
    CHECK_THROWS_AS(build_tree(RotationNumber{}, {10}, 1), Error);
    CHECK_THROWS_AS(build_tree(RotationNumber{}, {10, 14}, 0), Error);
}

TEST_CASE("low recurrence") {
    IntervalTree t = build_tree(RotationNumber{}, {10, 14, 18}, 2);
    REQUIRE(t.recurrence().size() == 3);
    CHECK(t.recurrence()[2].k_max == 16);
    CHECK_FALSE(t.recurrence()[2].capped);
    for (const auto& r : t.recurrence()) CHECK(r.min_clearance > 0);

    CHECK(recurrence_range(3, 100000) == 256);
    CHECK(recurrence_range(4, 100000) == 65536);
    CHECK(recurrence_range(5, 100000) == 100000);

    // root of length 1/4 meets its own translate by the golden mean twice over
    CHECK_THROWS_AS(IntervalTree(RotationNumber{}, {2, 5}, 1), RecurrenceViolation);
    try {
        IntervalTree(RotationNumber{}, {2, 5}, 1);
    } catch (const RecurrenceViolation& v) {
        CHECK(v.level == 0);
        CHECK(std::abs(v.k) >= 1);
    }
    IntervalTree esc = build_tree_escalating(RotationNumber{}, {2, 5}, 1, 40);
    CHECK(esc.m_seq()[0] > 2);
    CHECK(esc.m_seq()[1] >= esc.m_seq()[0] + 3);
}

TEST_CASE("level potentials") {
    const auto& tree = default_tree();
    CHECK(phi_level(tree, 0).is_zero());
    BumpPotential p1 = phi_level(tree, 1);
    Real c = frac(tree.interval(Word{"l"}).center() + tree.alpha());
    CHECK(p1.value(c) == 1);
    CHECK(p1.value(frac(tree.interval(Word{"l"}).center())) == 0);

    for (int n = 1; n <= tree.depth(); ++n) {
        CHECK(level_support_gap(tree, n) > 0);
        BumpPotential p = phi_level(tree, n);
        Real worst = 0;
        for (int i = 0; i < 100000; ++i) {
            Real x = i / 100000.0L;
            worst = std::max(worst, std::fabs(p.value(frac(x + tree.alpha())) - p.value(x)));
        }
        CHECK(worst <= 1 + 1e-15L);
    }
}

TEST_CASE("stage potential growth") {
    const auto& tree = default_tree();
    StagePotential phi(tree, 2);
    CHECK(phi.weight(1) == doctest::Approx(std::pow(2.0, -4.0 / 3)));
    for (Real b : phi.breakpoints()) CHECK(phi.value(b) >= 0);

    for (std::size_t i = 0; i < 8; ++i) {
        Word w = Word::from_index(3, i);
        auto rows = growth_table(tree, w);
        REQUIRE(rows.size() == 3);
        for (const auto& r : rows) {
            CHECK(r.at_point == 0);
            CHECK(r.ok);
        }
        CHECK(std::fabs(rows[0].shifted - std::pow(2.0L, -4.0L / 3)) < 1e-15L);
    }
}

TEST_CASE("normalizer and density conjugacy") {
    IntervalTree t1 = build_tree(RotationNumber{}, {10, 14}, 1);
    Stage s0 = build_stage(t1, 0);
    CHECK(s0.xi.xi == 1);
    CHECK(s0.h.kind() == NodeKind::Rotation);
    CHECK(s0.f(0.3L) == 0.3L + t1.alpha());

    Stage s1 = build_stage(t1, 1);
    CHECK(s1.xi.xi >= 1);
    CHECK(std::fabs(s1.xi.deviation()) < 0.05L);

    for (int N = 1; N <= 3; ++N) {
        const Stage& s = depth_stage(N);
        CHECK(std::fabs(s.xi.deviation()) < 0.05L);
        CHECK(std::fabs(s.h(1) - s.h(0) - 1) < 1e-9L);
        CHECK(s.h(0) == 0);
        Real kp = k_point(default_tree(), Word{"lrl"});
        CHECK(std::fabs(s.h.deriv(kp) - 1 / s.xi.xi) < 1e-15L);
    }
}

TEST_CASE("stage map identities") {
    const auto& tree = default_tree();
    const Stage& s = depth_stage(3);
    std::vector<Real> ys;
    for (int i = 0; i < 1000; ++i) ys.push_back(i / 1000.0L);
    for (Real b : s.potential->breakpoints()) ys.push_back(b);
    CHECK(log_derivative_identity_error(s, tree.alpha(), ys) < 1e-8L);

    auto rho = rotation_number(s.f, 0.1L, 10000);
    CHECK(std::fabs(rho.value - tree.alpha()) < 1e-3L);

    auto cert = certify(s.f, 4000);
    CHECK(cert.ok);

    for (Real x : testing::random_points(20, 7)) {
        CHECK(s.f.deriv(x) == doctest::Approx(static_cast<double>(testing::fd_derivative(s.f, x))).epsilon(1e-6));
    }
}

TEST_CASE("cgood certificate and minimality") {
    const auto& tree = default_tree();
    CGoodCertificate c0 = cgood_certificate(depth_stage(0), tree, Word{"ll"}, 200, 10);
    CHECK_FALSE(c0.verdict);

    CGoodCertificate c2 = cgood_certificate(depth_stage(2), tree, Word{"ll"}, 200, 10);
    REQUIRE(c2.forward_log_value.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) CHECK(c2.forward_log_value[i] >= c2.forward_log_bound[i]);
    CHECK(c2.profile.s_plus > 0);

    MinimalityProxy m = minimality_proxy(depth_stage(2), tree.alpha(), 10000);
    INFO(m.rotation_error, " ", m.max_gap, " ", m.rotation_max_gap, " ", m.min_gap, " ", m.rotation_min_gap, " ", m.distortion);
    CHECK(m.ok);
    CHECK(m.distortion >= 1);

    auto dists = stage_c0_distances(tree);
    REQUIRE(dists.size() == 3);
    CHECK(dists[1] < dists[0]);
    CHECK(dists[2] < dists[1]);
}

TEST_CASE("construction report") {
    MinimalConfig cfg;
    cfg.depth = 2;
    Construction c = construct(cfg);
    auto j = build_report(c);
    CHECK(j["depth"] == 2);
    CHECK(j["recurrence"].size() == 3);
    CHECK(j["growth"].size() == 2);
    MinimalConfig zero;
    zero.depth = 0;
    Construction z = construct(zero);
    CHECK(z.stage.f.kind() == NodeKind::Rotation);
}
