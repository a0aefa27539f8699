#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "cgreat/core/errors.hpp"
#include "cgreat/core/types.hpp"

namespace cgreat {

struct InvertOptions {
    Real tol = 1e-12L;
    int max_iter = 200;
};

/// Solves F(x) = y for a strictly increasing F given as a jet callback, with
/// `lo` and `hi` bracketing the root (F(lo) <= y <= F(hi)).
///
/// Bisection keeps the bracket; a Newton step is taken whenever it lands
/// strictly inside the bracket. Once the residual meets `tol`, a few more
/// Newton corrections polish the root down to rounding level, so downstream
/// log-derivative identities are not limited by the stopping tolerance.
template <class JetFn>
Real solve_increasing(const JetFn& jet, Real y, Real lo, Real hi,
                      const InvertOptions& opts = {}) {
    Real x = (lo + hi) / 2;
    Jet fx = jet(x);
    for (int iter = 0; iter < opts.max_iter; ++iter) {
        Real residual = fx.value - y;
        if (residual > 0) {
            hi = x;
        } else {
            lo = x;
        }
        if (std::fabs(residual) <= opts.tol) {
            for (int polish = 0; polish < 3 && fx.deriv > 0; ++polish) {
                Real step = residual / fx.deriv;
                Real xn = x - step;
                if (!(xn >= lo && xn <= hi)) break;
                Jet fn = jet(xn);
                Real rn = fn.value - y;
                if (std::fabs(rn) >= std::fabs(residual)) break;
                x = xn;
                fx = fn;
                residual = rn;
            }
            return x;
        }
        Real next = (lo + hi) / 2;
        if (fx.deriv > 0 && std::isfinite(fx.deriv)) {
            Real newton = x - residual / fx.deriv;
            if (newton > lo && newton < hi) next = newton;
        }
        if (next == x || hi - lo <= std::numeric_limits<Real>::epsilon() * (std::fabs(x) + 1)) {
            // Bracket collapsed to rounding level without meeting tol.
            std::ostringstream os;
            os << "bracket collapsed at x=" << static_cast<double>(x)
               << " residual=" << static_cast<double>(residual);
            throw Error(ErrorKind::InversionFailure, os.str());
        }
        x = next;
        fx = jet(x);
    }
    std::ostringstream os;
    os << "no convergence within " << opts.max_iter << " iterations for y="
       << static_cast<double>(y);
    throw Error(ErrorKind::IterationCap, os.str());
}

}  // namespace cgreat
