#pragma once

#include <memory>
#include <vector>

#include "cgreat/core/bumps.hpp"
#include "cgreat/core/lift.hpp"
#include "cgreat/core/potential.hpp"

namespace cgreat {

/// x -> x + alpha.
class RotationNode final : public LiftNode {
public:
    explicit RotationNode(Real alpha) : alpha_(alpha) {}
    Real alpha() const { return alpha_; }

    NodeKind kind() const override { return NodeKind::Rotation; }
    Real value(Real x) const override { return x + alpha_; }
    Jet jet(Real x) const override { return {x + alpha_, 1}; }
    Real solve(Real y, const InvertOptions&) const override { return y - alpha_; }
    void features(std::vector<Interval>&) const override {}
    nlohmann::json to_json() const override;

private:
    Real alpha_;
};

/// Piecewise-affine lift through knots (x_i, y_i), 0 = x_0 < ... < x_n = 1,
/// y_n = y_0 + 1, extended by F(x + 1) = F(x) + 1. Derivatives at knots are
/// right derivatives.
class AffinePatchworkNode final : public LiftNode {
public:
    AffinePatchworkNode(std::vector<Real> xs, std::vector<Real> ys);
    const std::vector<Real>& xs() const { return xs_; }
    const std::vector<Real>& ys() const { return ys_; }

    NodeKind kind() const override { return NodeKind::AffinePatchwork; }
    Jet jet(Real x) const override;
    Real solve(Real y, const InvertOptions&) const override;
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

private:
    std::vector<Real> xs_;
    std::vector<Real> ys_;
};

/// Diffeomorphism with Dh = 1 + e * phi_delta(A(y)) on each patch, where
/// A maps [c - rho, c + rho] affinely onto [-1/2, 1/2] and phi_delta is the
/// zero-mean bump. Identity off the patches; each patch is mapped onto itself.
class BumpDerivNode final : public LiftNode {
public:
    struct Patch {
        Real center = 0;      // lift coordinate
        Real half_width = 0;
        Real amplitude = 0;   // e_j
        int index = 0;        // orbit index j (bookkeeping)
    };
    BumpDerivNode(std::vector<Patch> patches, Real delta);
    const std::vector<Patch>& patches() const { return patches_; }
    const ZeroMeanBump& bump() const { return bump_; }

    NodeKind kind() const override { return NodeKind::BumpDerivDiffeo; }
    Real value(Real x) const override;
    Jet jet(Real x) const override;
    Real solve(Real y, const InvertOptions& opts) const override;
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

    /// Index into patches() of the patch containing x, and the integer
    /// shift s such that x - s lies in that patch; -1 when x is in none.
    long locate(Real x, Real& shift) const;

private:
    std::vector<Patch> patches_;  // sorted by frac(center)
    ZeroMeanBump bump_;
};

/// h(x) = (x + int_0^x expm1(Phi)) / xi on [0, 1], extended as a lift, so
/// Dh = exp(Phi) / xi and h(0) = 0.
class DensityNode final : public LiftNode {
public:
    DensityNode(std::shared_ptr<const BumpPotential> potential, Real xi);
    const BumpPotential& potential() const { return *potential_; }
    const std::shared_ptr<const BumpPotential>& potential_ptr() const { return potential_; }
    Real xi() const { return xi_; }

    NodeKind kind() const override { return NodeKind::DensityDiffeo; }
    Real value(Real x) const override;
    Jet jet(Real x) const override;
    Real solve(Real y, const InvertOptions& opts) const override;
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

private:
    std::shared_ptr<const BumpPotential> potential_;
    Real xi_;
};

class ComposeNode final : public LiftNode {
public:
    ComposeNode(Lift left, Lift right) : left_(std::move(left)), right_(std::move(right)) {}
    const Lift& left() const { return left_; }
    const Lift& right() const { return right_; }

    NodeKind kind() const override { return NodeKind::Compose; }
    Real value(Real x) const override { return left_.value(right_.value(x)); }
    Jet jet(Real x) const override;
    Real solve(Real y, const InvertOptions& opts) const override {
        return right_.solve(left_.solve(y, opts), opts);
    }
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

private:
    Lift left_;
    Lift right_;
};

class InverseNode final : public LiftNode {
public:
    explicit InverseNode(Lift inner, InvertOptions opts = {}) : inner_(std::move(inner)), opts_(opts) {}
    const Lift& inner() const { return inner_; }

    NodeKind kind() const override { return NodeKind::Inverse; }
    Real value(Real y) const override;
    Jet jet(Real y) const override;
    Real solve(Real x, const InvertOptions&) const override { return inner_.value(x); }
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

private:
    Lift inner_;
    InvertOptions opts_;
};

/// outer o inner o outer^-1.
class ConjugateNode final : public LiftNode {
public:
    ConjugateNode(Lift outer, Lift inner) : outer_(std::move(outer)), inner_(std::move(inner)) {}
    const Lift& outer() const { return outer_; }
    const Lift& inner() const { return inner_; }

    NodeKind kind() const override { return NodeKind::Conjugate; }
    Real value(Real x) const override;
    Jet jet(Real x) const override;
    Real solve(Real y, const InvertOptions& opts) const override;
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

private:
    Lift outer_;
    Lift inner_;
};

/// Orbit linearizer: on each patch [p - rho, p + rho] the map is
///   y + chi(|y - p| / rho) * (G(y) - y),   G(y) = p + slope * (f^{-m}(y) - anchor),
/// with chi = 1 on [0, 1/2] blending to 0 at 1. G fixes p with DG(p) = 1 when
/// slope = Df^m(anchor) and f^m(anchor) = p. Identity off the patches.
class OrbitLinearizerNode final : public LiftNode {
public:
    struct Patch {
        Real center = 0;      // p_j (lift)
        Real half_width = 0;  // rho_j
        Real anchor = 0;      // p_{-N'} (lift)
        long power = 0;       // m = j + N'
        Real slope = 1;       // Df^m(anchor)
        int index = 0;        // orbit index j
    };
    OrbitLinearizerNode(Lift base, std::vector<Patch> patches);
    const Lift& base() const { return base_; }
    const std::vector<Patch>& patches() const { return patches_; }

    NodeKind kind() const override { return NodeKind::OrbitLinearizer; }
    Real value(Real x) const override { return jet_impl(x, false).value; }
    Jet jet(Real x) const override { return jet_impl(x, true); }
    Real solve(Real y, const InvertOptions& opts) const override;
    void features(std::vector<Interval>& out) const override;
    nlohmann::json to_json() const override;

    long locate(Real x, Real& shift) const;
    /// Germ G of patch i at y (patch-local lift coordinate), value and derivative.
    Jet germ(std::size_t i, Real y) const;

private:
    Jet jet_impl(Real x, bool with_deriv) const;

    Lift base_;
    std::vector<Patch> patches_;  // sorted by frac(center)
};

}  // namespace cgreat
