#include "cgreat/core/lift.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cgreat/core/errors.hpp"
#include "cgreat/core/nodes.hpp"

namespace cgreat {

const char* to_string(NodeKind kind) {
    switch (kind) {
        case NodeKind::Rotation: return "Rotation";
        case NodeKind::AffinePatchwork: return "AffinePatchwork";
        case NodeKind::BumpDerivDiffeo: return "BumpDerivDiffeo";
        case NodeKind::DensityDiffeo: return "DensityDiffeo";
        case NodeKind::Compose: return "Compose";
        case NodeKind::Inverse: return "Inverse";
        case NodeKind::Conjugate: return "Conjugate";
        case NodeKind::OrbitLinearizer: return "OrbitLinearizer";
    }
    return "Unknown";
}

Real LiftNode::solve(Real y, const InvertOptions& opts) const {
    Real d = value(y) - y;
    Real lo = y - d - 1;
    Real hi = y - d + 1;
    return solve_increasing([this](Real x) { return jet(x); }, y, lo, hi, opts);
}

Lift::Lift() : Lift(rotation(0)) {}

Lift Lift::rotation(Real alpha) { return Lift(std::make_shared<RotationNode>(alpha)); }

Lift Lift::compose(const Lift& left, const Lift& right) {
    return Lift(std::make_shared<ComposeNode>(left, right));
}

Lift Lift::conjugate(const Lift& outer, const Lift& inner) {
    return Lift(std::make_shared<ConjugateNode>(outer, inner));
}

Jet Lift::jet(Real x) const {
    Jet j = node_->jet(x);
    if (!(j.deriv >= derivative_floor()) || !std::isfinite(j.deriv)) {
        std::ostringstream os;
        os << to_string(kind()) << " derivative " << static_cast<double>(j.deriv)
           << " below floor at x=" << static_cast<double>(x);
        throw Error(ErrorKind::DegenerateMap, os.str());
    }
    return j;
}

Lift Lift::inverse() const {
    if (auto* r = dynamic_cast<const RotationNode*>(node_.get())) return rotation(-r->alpha());
    if (auto* inv = dynamic_cast<const InverseNode*>(node_.get())) return inv->inner();
    return Lift(std::make_shared<InverseNode>(*this));
}

Real Lift::iterate(Real x, long m) const {
    if (m == 0) return x;
    switch (kind()) {
        case NodeKind::Rotation:
            return x + static_cast<Real>(m) * static_cast<const RotationNode&>(*node_).alpha();
        case NodeKind::Conjugate: {
            const auto& c = static_cast<const ConjugateNode&>(*node_);
            return c.outer().value(c.inner().iterate(c.outer().solve(x), m));
        }
        case NodeKind::Inverse:
            return static_cast<const InverseNode&>(*node_).inner().iterate(x, -m);
        default:
            break;
    }
    if (m > 0) {
        for (long i = 0; i < m; ++i) x = node_->value(x);
    } else {
        for (long i = 0; i < -m; ++i) x = node_->solve(x, {});
    }
    return x;
}

Jet Lift::iterate_jet(Real x, long m) const {
    if (m == 0) return {x, 1};
    switch (kind()) {
        case NodeKind::Rotation:
            return {iterate(x, m), 1};
        case NodeKind::Conjugate: {
            const auto& c = static_cast<const ConjugateNode&>(*node_);
            Real z = c.outer().solve(x);
            Real dz = 1 / c.outer().jet(z).deriv;
            Jet w = c.inner().iterate_jet(z, m);
            Jet o = c.outer().jet(w.value);
            return {o.value, o.deriv * w.deriv * dz};
        }
        case NodeKind::Inverse:
            return static_cast<const InverseNode&>(*node_).inner().iterate_jet(x, -m);
        default:
            break;
    }
    Real d = 1;
    if (m > 0) {
        for (long i = 0; i < m; ++i) {
            Jet j = jet(x);
            d *= j.deriv;
            x = j.value;
        }
    } else {
        for (long i = 0; i < -m; ++i) {
            x = node_->solve(x, {});
            d /= jet(x).deriv;
        }
    }
    return {x, d};
}

std::vector<Interval> Lift::features() const {
    std::vector<Interval> out;
    node_->features(out);
    return out;
}

std::vector<Real> Lift::breakpoints() const {
    std::vector<Real> pts;
    for (const auto& iv : features()) {
        pts.push_back(frac(iv.lo));
        pts.push_back(frac(iv.hi));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

Real invert(const Lift& f, Real y, const InvertOptions& opts) {
    Real d = f.value(y) - y;
    Real x = solve_increasing([&f](Real t) { return f.node().jet(t); }, y, y - d - 1, y - d + 1, opts);
    return x;
}

std::vector<Real> sample_features(const std::vector<Interval>& features, std::size_t grid,
                                std::size_t per_feature) {
    std::vector<Real> pts;
    pts.reserve(grid + features.size() * (per_feature + 1));
    for (std::size_t i = 0; i < grid; ++i) pts.push_back(static_cast<Real>(i) / grid);
    for (const auto& iv : features) {
        if (per_feature == 0 || iv.width() <= 0) {
            pts.push_back(frac(iv.lo));
            pts.push_back(frac(iv.hi));
            continue;
        }
        for (std::size_t k = 0; k <= per_feature; ++k)
            pts.push_back(frac(iv.lo + iv.width() * static_cast<Real>(k) / per_feature));
    }
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

std::vector<Real> sample_points(const std::vector<const Lift*>& lifts, std::size_t grid,
                                std::size_t per_feature) {
    std::vector<Interval> feats;
    for (const Lift* l : lifts) {
        auto f = l->features();
        feats.insert(feats.end(), f.begin(), f.end());
    }
    return sample_features(feats, grid, per_feature);
}

Certificate certify(const Lift& f, std::size_t grid, Real degree_one_tol) {
    Certificate c;
    c.min_deriv = INFINITY;
    c.max_deriv = 0;
    auto pts = sample_points({&f}, grid, 16);
    for (Real x : pts) {
        Real d = f.node().jet(x).deriv;
        if (!std::isfinite(d)) d = 0;
        c.min_deriv = std::min(c.min_deriv, d);
        c.max_deriv = std::max(c.max_deriv, d);
    }
    c.samples = pts.size();
    std::size_t deg_grid = std::min<std::size_t>(grid, 1000);
    for (std::size_t i = 0; i < deg_grid; ++i) {
        Real x = static_cast<Real>(i) / deg_grid;
        c.degree_one_error = std::max(c.degree_one_error, std::fabs(f.value(x + 1) - f.value(x) - 1));
    }
    c.ok = c.min_deriv >= Lift::derivative_floor() && c.degree_one_error <= degree_one_tol;
    return c;
}

void require_certified(const Lift& f, std::size_t grid, Real degree_one_tol) {
    Certificate c = certify(f, grid, degree_one_tol);
    if (!c.ok) {
        std::ostringstream os;
        os << to_string(f.kind()) << " failed certificate: min Df=" << static_cast<double>(c.min_deriv)
           << " degree-one error=" << static_cast<double>(c.degree_one_error);
        throw Error(ErrorKind::DegenerateMap, os.str());
    }
}

}  // namespace cgreat
