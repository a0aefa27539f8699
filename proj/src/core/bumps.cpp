#include "cgreat/core/bumps.hpp"

#include <cmath>

#include "cgreat/core/errors.hpp"

namespace cgreat {

Jet smoothstep5(Real s) {
    if (s <= 0) return {0, 0};
    if (s >= 1) return {1, 0};
    Real s2 = s * s;
    Real s3 = s2 * s;
    return {s3 * (10 - 15 * s + 6 * s2), 30 * s2 * (1 - 2 * s + s2)};
}

Jet PlateauBump::eval(Real t) {
    Real a = std::fabs(t);
    if (a <= Real(0.25)) return {1, 0};
    if (a >= Real(0.5)) return {0, 0};
    Jet s = smoothstep5((Real(0.5) - a) * 4);
    Real sign = t > 0 ? 1 : -1;
    return {s.value, -4 * sign * s.deriv};
}

Real PlateauBump::integral(Real t) {
    // int_0^q smoothstep5 = q^4 (5/2 - 3q + q^2)
    auto ramp = [](Real q) { return q * q * q * q * (Real(2.5) - 3 * q + q * q); };
    if (t <= Real(-0.5)) return 0;
    if (t < Real(-0.25)) return ramp(4 * (Real(0.5) + t)) / 4;
    if (t <= Real(0.25)) return Real(0.125) + (t + Real(0.25));
    if (t < Real(0.5)) return Real(0.75) - ramp(4 * (Real(0.5) - t)) / 4;
    return Real(0.75);
}

Jet cubic_bump(Real s) {
    if (s <= -1 || s >= 1) return {0, 0};
    Real q = 1 - s * s;
    return {q * q * q, -6 * s * q * q};
}

Real cubic_bump_integral(Real s) {
    if (s <= -1) return 0;
    if (s >= 1) return Real(32) / 35;
    Real s2 = s * s;
    return s * (1 - s2 + Real(3) / 5 * s2 * s2 - s2 * s2 * s2 / 7) + Real(16) / 35;
}

ZeroMeanBump::ZeroMeanBump(Real delta) : delta_(delta) {
    if (!(delta > 0 && delta <= Real(0.25)))
        throw Error(ErrorKind::Precondition, "zero-mean bump needs delta in (0, 1/4]");
}

Jet ZeroMeanBump::eval(Real t) const {
    Real w = 2 * peak_half_width();
    Jet peak = PlateauBump::eval(t / w);
    Jet left = cubic_bump(8 * t + 3);
    Jet right = cubic_bump(8 * t - 3);
    return {peak.value - delta_ * (left.value + right.value),
            peak.deriv / w - 8 * delta_ * (left.deriv + right.deriv)};
}

Real ZeroMeanBump::antiderivative(Real t) const {
    if (t <= Real(-0.5) || t >= Real(0.5)) return 0;
    Real w = 2 * peak_half_width();
    return w * PlateauBump::integral(t / w) -
           delta_ / 8 * (cubic_bump_integral(8 * t + 3) + cubic_bump_integral(8 * t - 3));
}

}  // namespace cgreat
