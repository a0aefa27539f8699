#pragma once

#include "cgreat/core/types.hpp"

namespace cgreat {

/// Quintic smoothstep 6s^5 - 15s^4 + 10s^3 on [0, 1], clamped outside.
Jet smoothstep5(Real s);

/// Plateau bump: symmetric, supported on [-1/2, 1/2], identically 1 on
/// [-1/4, 1/4], quintic smoothstep transitions in between (C^2).
struct PlateauBump {
    static Jet eval(Real t);
    static Real value(Real t) { return eval(t).value; }
    /// Integral from -1/2 to t (total mass 3/4).
    static Real integral(Real t);
};

/// Compact C^2 bump (1 - s^2)^3 on (-1, 1) and its antiderivative measured
/// from -1 (total mass 32/35).
Jet cubic_bump(Real s);
Real cubic_bump_integral(Real s);

/// Zero-mean bump with range [-delta, 1]: a narrow flat-topped peak at 0
/// (plateau bump scaled to support half-width 16 delta / 105) minus troughs of
/// depth delta centred at +-3/8 (half-width 1/8). Peak mass 3/4 * 32 delta / 105
/// equals the trough mass 2 * delta/8 * 32/35.
class ZeroMeanBump {
public:
    explicit ZeroMeanBump(Real delta);

    Real delta() const { return delta_; }
    Real peak_half_width() const { return 16 * delta_ / 105; }

    Jet eval(Real t) const;
    Real value(Real t) const { return eval(t).value; }
    /// Integral from -1/2 to t. Vanishes at t = 0 and t = 1/2.
    Real antiderivative(Real t) const;

private:
    Real delta_;
};

}  // namespace cgreat
