#pragma once

#include <memory>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgreat/core/root_find.hpp"
#include "cgreat/core/types.hpp"

namespace cgreat {

enum class NodeKind {
    Rotation,
    AffinePatchwork,
    BumpDerivDiffeo,
    DensityDiffeo,
    Compose,
    Inverse,
    Conjugate,
    OrbitLinearizer,
};

const char* to_string(NodeKind kind);

class Lift;

/// Node of an immutable expression tree representing a degree-one,
/// strictly increasing lift of a circle map.
class LiftNode {
public:
    virtual ~LiftNode() = default;

    virtual NodeKind kind() const = 0;
    virtual Real value(Real x) const { return jet(x).value; }
    virtual Jet jet(Real x) const = 0;
    /// Solves value(x) = y. The default brackets around y and root-finds.
    virtual Real solve(Real y, const InvertOptions& opts) const;
    /// Regions (lift coordinates) where the map is not locally a translation
    /// or where its derivative has structure worth sampling densely.
    virtual void features(std::vector<Interval>& out) const = 0;
    virtual nlohmann::json to_json() const = 0;
};

/// Handle to an expression-tree lift with value semantics (shared immutable node).
class Lift {
public:
    Lift();  // identity
    explicit Lift(std::shared_ptr<const LiftNode> node) : node_(std::move(node)) {}

    static Lift rotation(Real alpha);
    static Lift identity() { return rotation(0); }
    static Lift compose(const Lift& left, const Lift& right);  // left o right
    static Lift conjugate(const Lift& outer, const Lift& inner);  // outer o inner o outer^-1

    NodeKind kind() const { return node_->kind(); }
    const LiftNode& node() const { return *node_; }
    const std::shared_ptr<const LiftNode>& node_ptr() const { return node_; }

    Real operator()(Real x) const { return node_->value(x); }
    Real value(Real x) const { return node_->value(x); }
    /// Value and derivative; throws DegenerateMap when DF(x) < derivative floor.
    Jet jet(Real x) const;
    Real deriv(Real x) const { return jet(x).deriv; }

    /// Root-finding inverse value: x with F(x) = y.
    Real solve(Real y, const InvertOptions& opts = {}) const { return node_->solve(y, opts); }
    /// Inverse as a lift (Inverse node, simplified for rotations and double inverses).
    Lift inverse() const;

    /// F^m(x) for any integer m, exploiting conjugacy structure when present.
    Real iterate(Real x, long m) const;
    Jet iterate_jet(Real x, long m) const;

    std::vector<Interval> features() const;
    /// Feature endpoints reduced to [0, 1), sorted and unique.
    std::vector<Real> breakpoints() const;

    nlohmann::json to_json() const { return node_->to_json(); }
    static Lift from_json(const nlohmann::json& j);

    static Real derivative_floor() { return 1e-10L; }

private:
    std::shared_ptr<const LiftNode> node_;
};

/// Root-finding inverse of a generic increasing degree-one lift, bracketed
/// around y using |F(x) - x - (F(y) - y)| < 1.
Real invert(const Lift& f, Real y, const InvertOptions& opts = {});

/// Sampled monotonicity and degree-one certificate.
struct Certificate {
    Real min_deriv = 0;
    Real max_deriv = 0;
    Real degree_one_error = 0;
    std::size_t samples = 0;
    bool ok = false;
};

/// Samples DF on a uniform grid plus all breakpoints and feature interiors,
/// and checks |F(x+1) - F(x) - 1| on a coarser grid.
Certificate certify(const Lift& f, std::size_t grid = 10000, Real degree_one_tol = 1e-12L);
/// certify() and throw DegenerateMap on failure.
void require_certified(const Lift& f, std::size_t grid = 10000, Real degree_one_tol = 1e-12L);

/// Uniform grid of [0,1) merged with `per_feature` points inside every
/// feature interval of the given lifts, reduced to [0, 1), sorted, unique.
std::vector<Real> sample_points(const std::vector<const Lift*>& lifts, std::size_t grid,
                                std::size_t per_feature);
std::vector<Real> sample_features(const std::vector<Interval>& features, std::size_t grid,
                                std::size_t per_feature);

}  // namespace cgreat
