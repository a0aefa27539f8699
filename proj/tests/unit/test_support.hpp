#pragma once

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "cgreat/core/lift.hpp"
#include "cgreat/core/nodes.hpp"

namespace cgreat::testing {

// Golden mean conjugate (sqrt(5) - 1) / 2.
inline Real golden() { return (std::sqrt(Real(5)) - 1) / 2; }

inline Lift affine(std::vector<Real> xs, std::vector<Real> ys) {
    return Lift(std::make_shared<AffinePatchworkNode>(std::move(xs), std::move(ys)));
}

/// Smooth density diffeomorphism with two moderate bumps.
inline Lift smooth_density() {
    std::vector<BumpTerm> terms{{0.2L, 0.2L, 0.5L, 0, 0, ""}, {0.65L, 0.1L, -0.3L, 0, 0, ""}};
    auto pot = std::make_shared<BumpPotential>(terms);
    return Lift(std::make_shared<DensityNode>(pot, 1 + pot->total_excess()));
}

/// h o R_alpha o h^-1 for the smooth density above.
inline Lift smooth_circle_map(Real alpha = golden()) {
    return Lift::conjugate(smooth_density(), Lift::rotation(alpha));
}

/// Five-point central difference (independent of the jet code path).
template <class Fn>
Real fd_derivative(const Fn& f, Real x, Real eta = 1e-6L) {
    return (-f(x + 2 * eta) + 8 * f(x + eta) - 8 * f(x - eta) + f(x - 2 * eta)) / (12 * eta);
}

inline std::vector<Real> random_points(std::size_t n, unsigned seed, Real lo = 0, Real hi = 1) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> dist(static_cast<double>(lo), static_cast<double>(hi));
    std::vector<Real> pts(n);
    for (auto& p : pts) p = dist(rng);
    return pts;
}

}  // namespace cgreat::testing
