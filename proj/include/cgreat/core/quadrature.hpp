#pragma once

#include <functional>

#include "cgreat/core/types.hpp"

namespace cgreat {

/// Adaptive bisection with a 30-point Gauss-Legendre rule; integral of a smooth integrand on [a, b].
/// Throws ErrorKind::Quadrature when the error estimate exceeds `abs_tol`.
Real integrate(const std::function<Real(Real)>& f, Real a, Real b, Real abs_tol = 1e-14L);

}  // namespace cgreat
