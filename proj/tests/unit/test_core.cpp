#include "doctest.h"

#include "cgreat/core/bumps.hpp"
#include "cgreat/core/errors.hpp"
#include "cgreat/core/orbit.hpp"
#include "cgreat/core/quadrature.hpp"
#include "test_support.hpp"

using namespace cgreat;
using namespace cgreat::testing;

TEST_CASE("eval on rotations and compositions") {
    Lift r = Lift::rotation(0.25L);
    CHECK(r(0.5L) == doctest::Approx(0.75));
    Lift inv(std::make_shared<InverseNode>(r));
    CHECK(static_cast<double>(inv(0.75L)) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(r.inverse()(0.75L) == doctest::Approx(0.5));
    Lift c = Lift::compose(Lift::rotation(0.1L), Lift::rotation(0.2L));
    CHECK(static_cast<double>(c(0)) == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(r.deriv(0.123L) == 1);
}

TEST_CASE("bump derivative diffeo peaks at 1 + e") {
    Real e = 0.8L;
    Lift h(std::make_shared<BumpDerivNode>(std::vector<BumpDerivNode::Patch>{{0.4L, 0.05L, e, 0}}, 0.1L));
    CHECK(std::fabs(h.deriv(0.4L) - (1 + e)) < 1e-15L);
    // zero-mean bump: endpoints and the centre are fixed
    CHECK(std::fabs(h(0.35L) - 0.35L) < 1e-15L);
    CHECK(std::fabs(h(0.45L) - 0.45L) < 1e-15L);
    CHECK(std::fabs(h(0.4L) - 0.4L) < 1e-15L);
    CHECK(h(0.7L) == 0.7L);
}

TEST_CASE("plateau bump integral") {
    for (Real t : {-0.45L, -0.3L, 0.0L, 0.2L, 0.3L, 0.49L}) {
        Real q = 0;
        Real cuts[] = {-0.5L, -0.25L, 0.25L, 0.5L};
        for (int i = 0; i < 3; ++i) {
            Real a = cuts[i], c = std::min(t, cuts[i + 1]);
            if (c > a) q += integrate([](Real s) { return PlateauBump::value(s); }, a, c, 1e-16L);
        }
        CHECK(std::fabs(q - PlateauBump::integral(t)) < 1e-15L);
    }
    CHECK(PlateauBump::integral(1) == 0.75L);
}

TEST_CASE("zero-mean bump shape invariants") {
    for (Real delta : {0.01L, 0.1L, 0.25L}) {
        ZeroMeanBump b(delta);
        CHECK(b.value(0) == 1);
        Real lo = 1, hi = -1;
        for (int i = -600; i <= 600; ++i) {
            Real t = i / Real(1200);
            Real v = b.value(t);
            lo = std::min(lo, v);
            hi = std::max(hi, v);
            CHECK(std::fabs(v - b.value(-t)) < 1e-15L);
        }
        CHECK(b.value(b.peak_half_width() / 2) == 1);
        CHECK(b.eval(b.peak_half_width() / 4).deriv == 0);
        CHECK(lo >= -delta - 1e-15L);
        CHECK(hi <= 1);
        // piecewise quadrature split at the kinks of the shape
        Real w = b.peak_half_width();
        std::vector<Real> cuts{-0.5L, -0.375L, -0.25L, -w, -w / 2, 0, w / 2, w, 0.25L, 0.375L, 0.5L};
        auto piecewise = [&](Real lo, Real hi) {
            Real s = 0;
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                Real a = std::max(lo, cuts[i]), c = std::min(hi, cuts[i + 1]);
                if (c > a) s += integrate([&](Real t) { return b.value(t); }, a, c, 1e-16L);
            }
            return s;
        };
        CHECK(std::fabs(piecewise(-0.5L, 0.5L)) < 1e-12L);
        CHECK(std::fabs(piecewise(-0.5L, 0)) < 1e-12L);
        CHECK(std::fabs(b.antiderivative(0)) < 1e-15L);
        CHECK(std::fabs(b.antiderivative(0.5L)) < 1e-15L);
        // closed-form antiderivative against quadrature
        for (Real t : {-0.4L, -0.3L, -0.01L, 0.002L, 0.3L}) {
            Real q = piecewise(-0.5L, t);
            CHECK(std::fabs(q - b.antiderivative(t)) < 1e-12L);
        }
    }
    CHECK_THROWS_AS(ZeroMeanBump(0.5L), Error);
}

TEST_CASE("derivatives agree with finite differences") {
    std::vector<Lift> maps{smooth_density(), smooth_circle_map(),
                           Lift(std::make_shared<BumpDerivNode>(
                               std::vector<BumpDerivNode::Patch>{{0.4L, 0.05L, 0.8L, 0}}, 0.2L)),
                           smooth_density().inverse(),
                           Lift::compose(smooth_density(), Lift::rotation(0.3L))};
    for (const Lift& f : maps) {
        Real worst = 0;
        for (int i = 0; i < 1000; ++i) {
            Real x = (i + 0.5L) / 1000;
            Real fd = (f(x + 1e-6L) - f(x - 1e-6L)) / 2e-6L;
            worst = std::max(worst, std::fabs(fd - f.deriv(x)));
        }
        CHECK(worst < 1e-4L);
    }
}

TEST_CASE("invert hits the target") {
    Lift r = Lift::rotation(0.25L);
    CHECK(std::fabs(invert(r, 0.75L) - 0.5L) < 1e-15L);
    Lift a = affine({0, 0.25L, 1}, {0, 0.5L, 1});
    CHECK(std::fabs(a.solve(0.5L) - 0.25L) < 1e-18L);
    CHECK(std::fabs(invert(a, 0.5L) - 0.25L) < 1e-12L);
    Lift f = smooth_circle_map();
    for (Real y : random_points(1000, 7, -2, 3)) {
        CHECK(std::fabs(f(f.solve(y)) - y) <= 1e-12L);
        CHECK(std::fabs(f(invert(f, y)) - y) <= 1e-12L);
    }
}

TEST_CASE("monotone and degree one certificates") {
    for (const Lift& f : {smooth_circle_map(), smooth_density(), affine({0, 0.25L, 1}, {0, 0.5L, 1})}) {
        Certificate c = certify(f, 10000);
        CHECK(c.ok);
        CHECK(c.min_deriv > 0);
        CHECK(c.degree_one_error <= 1e-12L);
    }
}

TEST_CASE("orbit segments and cocycle") {
    Real a = golden();
    OrbitSegment o = iterate(Lift::rotation(a), 0, -2, 2);
    for (long j = -2; j <= 2; ++j) {
        CHECK(std::fabs(o.point(j) - j * a) < 1e-18L);
        CHECK(o.deriv(j) == 1);
    }
    // slope 2 on [0, 0.1] and [0.9, 1]: 0 is a fixed point with Df = 2
    Lift doubling = affine({0, 0.1L, 0.9L, 1}, {0, 0.2L, 0.8L, 1});
    OrbitSegment d = iterate(doubling, 0, 0, 12);
    for (long n = 0; n <= 12; ++n) CHECK(d.deriv(n) == std::ldexp(Real(1), static_cast<int>(n)));

    Lift f = smooth_circle_map();
    for (Real x : random_points(100, 11)) {
        OrbitSegment s = iterate(f, x, -40, 40);
        for (long n = -20; n <= 20; n += 5) {
            OrbitSegment t = iterate(f, s.point(n), -20, 20);
            for (long m = -20; m <= 20; m += 4) {
                Real lhs = s.deriv(m + n);
                Real rhs = t.deriv(m) * s.deriv(n);
                CHECK(std::fabs(lhs - rhs) <= 1e-9L * std::max<Real>(1, std::fabs(lhs)));
            }
        }
    }
    CHECK_THROWS_AS(iterate(f, 0, 1, 3), Error);
}

TEST_CASE("structural powers match repeated application") {
    Lift f = smooth_circle_map();
    for (long m : {-7L, -1L, 1L, 5L}) {
        Real x = 0.31L;
        Real y = x;
        Real d = 1;
        for (long i = 0; i < std::labs(m); ++i) {
            if (m > 0) {
                Jet j = f.jet(y);
                d *= j.deriv;
                y = j.value;
            } else {
                y = f.solve(y);
                d /= f.deriv(y);
            }
        }
        Jet p = f.iterate_jet(x, m);
        CHECK(std::fabs(p.value - y) < 1e-15L);
        CHECK(std::fabs(p.deriv - d) < 1e-13L);
    }
}

TEST_CASE("rotation numbers") {
    Real a = golden();
    CHECK(rotation_number(Lift::rotation(a), 0.3L, 50).value == doctest::Approx(static_cast<double>(a)));
    Lift f = smooth_circle_map(a);
    RotationEstimate est = rotation_number(f, 0.1L, 5000);
    CHECK(std::fabs(est.value - a) <= est.error_bound);
    // conjugation invariance within 2/n
    Lift h(std::make_shared<BumpDerivNode>(std::vector<BumpDerivNode::Patch>{{0.5L, 0.2L, 1.5L, 0}}, 0.2L));
    Lift g = Lift::conjugate(h, f);
    long n = 2000;
    CHECK(std::fabs(rotation_number(g, 0, n).value - rotation_number(f, 0, n).value) <= Real(2) / n);
    CHECK_THROWS_AS(rotation_number(f, 0, 0), Error);
}

TEST_CASE("delta statistic") {
    Lift f = smooth_circle_map();
    CHECK(delta_stat(f, 0.3L, 0.01L, 0.01L).value == 1);
    CHECK(std::fabs(delta_stat(Lift::rotation(0.1L), 0.2L, 0.01L, 0.1L).value - 1) < 1e-15L);
    Lift a = affine({0, 0.1L, 0.2L, 1}, {0, 0.2L, 0.3L, 1});
    DeltaProbe p = delta_stat(a, 0, 0.1L, 0.2L);
    CHECK(std::fabs(p.value - Real(4) / 3) < 1e-15L);
    // recomputed from raw evaluations
    Real raw = (p.v / p.u) * (a(0.1L) - a(0)) / (a(0.2L) - a(0));
    CHECK(std::fabs(raw - p.value) < 1e-12L);
    CHECK_THROWS_AS(delta_stat(f, 0, 0.2L, 0.1L), Error);

    // differentiable map: Delta(f, x, u, 2u) - 1 shrinks as u -> 0
    Real x0 = smooth_density()(0.13L);  // inside a bump transition of the conjugacy
    Real prev = INFINITY;
    int decreases = 0;
    for (int k = 5; k <= 20; ++k) {
        Real u = std::ldexp(Real(1), -k);
        Real dev = std::fabs(delta_stat(f, x0, u, 2 * u).value - 1);
        if (dev <= prev) ++decreases;
        prev = dev;
    }
    CHECK(decreases >= 14);
    CHECK(prev < 1e-4L);
}

TEST_CASE("C-good profiles and proxy") {
    CGoodProfile rot = cgood_profile(Lift::rotation(golden()), 0, 10);
    CHECK(rot.s_plus == 10);
    CHECK(rot.s_minus == 9);
    CHECK(rot.m_minus == 1);
    Lift doubling = affine({0, 0.1L, 0.9L, 1}, {0, 0.2L, 0.8L, 1});
    for (long K : {1L, 5L, 30L}) CHECK(cgood_profile(doubling, 0, K).s_plus < Real(4) / 3);

    CGoodProfile rot200 = cgood_profile(Lift::rotation(golden()), 0, 200);
    CHECK_FALSE(is_cgood_proxy(rot200, 2, 10));

    CGoodProfile geo;
    geo.horizon = 200;
    geo.s_plus = Real(4) / 3 * (1 - std::pow(Real(4), -200));
    geo.m_minus = 50;
    geo.s_minus = 20;
    CHECK(is_cgood_proxy(geo, 2, 10));
    CHECK_THROWS_AS(is_cgood_proxy(rot, 2, 10), Error);
}

TEST_CASE("symmetric sum") {
    Real a = 0.3L;
    Function1D F = sym_sum(Lift::rotation(a));
    for (Real x : {0.0L, 0.4L, 1.7L}) {
        CHECK(std::fabs(F.value(x) - 2 * x) < 1e-18L);
        CHECK(F(x).deriv == 2);
    }
    Lift f = smooth_circle_map();
    Function1D G = sym_sum(f);
    for (Real x : random_points(200, 3)) {
        Real fd = fd_derivative([&](Real t) { return G.value(t); }, x, 1e-6L);
        CHECK(std::fabs(fd - G(x).deriv) < 1e-9L);
        Real direct = f.deriv(x) + 1 / f.deriv(f.solve(x));
        CHECK(std::fabs(direct - G(x).deriv) < 1e-15L);
    }
    // circle involution: f o f = R_1, so f^-1 = f - 1
    Lift inv = affine({0, 0.1L, 0.5L, 0.7L, 1}, {0.5L, 0.7L, 1.0L, 1.1L, 1.5L});
    Function1D S = sym_sum(inv);
    for (Real x : {0.05L, 0.3L, 0.6L, 0.85L}) {
        CHECK(std::fabs(inv(inv(x)) - x - 1) < 1e-15L);
        CHECK(std::fabs(S(x).deriv - (inv.deriv(x) + 1 / inv.deriv(inv(x)))) < 1e-15L);
    }
}

TEST_CASE("distances") {
    Lift f = smooth_circle_map();
    CHECK(c0_distance(f, f) == 0);
    CHECK(c1_distance_symsum(f, f) == 0);
    CHECK(std::fabs(c0_distance(Lift::rotation(0.1L), Lift::rotation(0.35L)) - 0.25L) < 1e-15L);
    CHECK_THROWS_AS(c0_distance(f, f, 10), Error);
}

TEST_CASE("serialization round trip preserves evaluation") {
    Lift f = Lift::compose(smooth_circle_map(),
                           Lift(std::make_shared<BumpDerivNode>(
                               std::vector<BumpDerivNode::Patch>{{0.4L, 0.05L, 0.8L, 0}}, 0.2L)));
    Lift g = Lift::from_json(nlohmann::json::parse(f.to_json().dump()));
    for (Real x : random_points(50, 5)) CHECK(g(x) == f(x));
    CHECK_THROWS_AS(Lift::from_json(nlohmann::json{{"kind", "Nope"}}), Error);
}
