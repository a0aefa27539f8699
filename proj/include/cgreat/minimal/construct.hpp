#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgreat/core/lift.hpp"
#include "cgreat/core/orbit.hpp"
#include "cgreat/core/potential.hpp"
#include "cgreat/minimal/interval_tree.hpp"

namespace cgreat::minimal {

/// Bump terms of phi_n scaled by `weight`: for every word w of length n and
/// 1 <= k <= 2n - 1, a plateau bump on I_w + k alpha with height (n - |n - k|).
std::vector<BumpTerm> level_terms(const IntervalTree& tree, int n, Real weight = 1);

/// phi_n as an evaluable potential (zero for n = 0).
BumpPotential phi_level(const IntervalTree& tree, int n);

/// Smallest gap between distinct supports of level n (positive iff disjoint).
Real level_support_gap(const IntervalTree& tree, int n);

/// Sum over 0 <= n <= N of (n + 1)^(-4/3) phi_n.
class StagePotential {
public:
    StagePotential(const IntervalTree& tree, int N, Real quad_tol = 1e-10L);

    int stage() const { return N_; }
    Real weight(int n) const;
    const std::vector<Real>& weights() const { return weights_; }
    Real value(Real x) const { return phi_->value(x); }
    Jet jet(Real x) const { return phi_->jet(x); }
    const std::vector<Real>& breakpoints() const { return phi_->breakpoints(); }
    const std::shared_ptr<const BumpPotential>& potential() const { return phi_; }
    /// Absolute tolerance requested for the integral over the whole circle.
    Real quadrature_tolerance() const { return quad_tol_; }

private:
    int N_;
    std::vector<Real> weights_;
    Real quad_tol_;
    std::shared_ptr<const BumpPotential> phi_;
};

StagePotential build_potential(const IntervalTree& tree, int N, Real quad_tol = 1e-10L);

struct Normalizer {
    Real xi = 1;
    Real error_bound = 0;
    Real deviation() const { return xi - 1; }
};

/// xi = integral of exp(Phi) over the circle, split at the breakpoints.
Normalizer normalizer(const StagePotential& phi);

/// h(0) = 0, Dh = exp(Phi) / xi.
Lift build_h(const StagePotential& phi, const Normalizer& xi);

/// h o R_alpha o h^-1.
Lift build_f(const Lift& h, Real alpha);

/// Midpoint of I_w.
Real k_point(const IntervalTree& tree, const Word& w);

struct GrowthRow {
    int N = 0;
    Real at_point = 0;    // Phi_N(x)
    Real shifted = 0;     // Phi_N(x + N alpha)
    Real bound = 0;       // 0.1 N^(2/3)
    bool ok = false;
};

/// Rows N = 1..depth for the K-point representative of `w` (|w| = depth).
std::vector<GrowthRow> growth_table(const IntervalTree& tree, const Word& w, Real quad_tol = 1e-10L);

struct Stage {
    int N = 0;
    std::shared_ptr<const StagePotential> potential;
    Normalizer xi;
    Lift h;
    Lift f;
};

Stage build_stage(const IntervalTree& tree, int N, Real quad_tol = 1e-10L);

/// max over the samples of |ln Df(h(y)) - (Phi(y + alpha) - Phi(y))|.
Real log_derivative_identity_error(const Stage& stage, Real alpha, const std::vector<Real>& ys);

struct CGoodCertificate {
    Real x = 0;  // h(k_point)
    CGoodProfile profile;
    bool verdict = false;
    Real growth_exponent = 0;     // least-squares slope of ln Df^n against n^(2/3)
    Real max_backward_potential = 0;  // max over the horizon of Phi(h^-1(x) - n alpha)
    std::vector<Real> forward_log_bound;  // 0.1 N^(2/3) - ln xi for N <= depth
    std::vector<Real> forward_log_value;  // ln Df^N(x)
};

CGoodCertificate cgood_certificate(const Stage& stage, const IntervalTree& tree, const Word& w,
                                   long horizon, Real C, Real growth_threshold = 10);

struct MinimalityProxy {
    long orbit_length = 0;
    Real rotation = 0;
    Real rotation_error = 0;   // |rotation - alpha|
    Real max_gap = 0;          // of the f-orbit on the circle
    Real min_gap = 0;
    Real rotation_max_gap = 0;  // of the rigid-rotation orbit
    Real rotation_min_gap = 0;
    Real distortion = 1;       // sup Dh / inf Dh
    bool ok = false;
};

/// Orbit of length n under f compared with the rigid rotation through the
/// three-gap structure, allowing for the distortion of h.
MinimalityProxy minimality_proxy(const Stage& stage, Real alpha, long n);

/// c0_distance(h_N, h_{N+1}) for N = 0..depth-1.
std::vector<Real> stage_c0_distances(const IntervalTree& tree, Real quad_tol = 1e-10L);

struct MinimalConfig {
    RotationNumber alpha;
    std::vector<int> m_seq{10, 14, 18, 24};
    int depth = 3;
    int m_cap = 40;
    TreeOptions tree;
    Real quad_tol = 1e-10L;
};

struct Construction {
    IntervalTree tree;
    Stage stage;
};

/// Tree (with escalation) and the depth-stage map.
Construction construct(const MinimalConfig& cfg);

nlohmann::json build_report(const Construction& c);

}  // namespace cgreat::minimal
