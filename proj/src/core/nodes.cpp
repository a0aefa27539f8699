#include "cgreat/core/nodes.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cgreat/core/errors.hpp"

namespace cgreat {

namespace {

// Tolerance for root-finding inside a patch: relative to the patch size,
// but never below the rounding level of the target value.
InvertOptions patch_options(const InvertOptions& opts, Real half_width, Real y) {
    InvertOptions local = opts;
    Real floor = 64 * std::numeric_limits<Real>::epsilon() * (1 + std::fabs(y));
    local.tol = std::max(std::min(opts.tol, Real(1e-9) * half_width), floor);
    return local;
}

// Patches are disjoint arcs sorted by frac(center); the one containing x (if
// any) is the circular predecessor or successor of frac(x).
template <class PatchVec>
long locate_patch(const PatchVec& patches, Real x, Real& shift) {
    if (patches.empty()) return -1;
    Real u = frac(x);
    auto it = std::upper_bound(patches.begin(), patches.end(), u,
                               [](Real v, const auto& p) { return v < frac(p.center); });
    long n = static_cast<long>(patches.size());
    long succ = static_cast<long>(it - patches.begin()) % n;
    long pred = (succ - 1 + n) % n;
    for (long i : {pred, succ}) {
        const auto& p = patches[static_cast<std::size_t>(i)];
        Real d = wrap(x - p.center);
        if (std::fabs(d) < p.half_width) {
            shift = std::round(x - p.center - d);
            return i;
        }
    }
    return -1;
}

template <class PatchVec>
void sort_patches(PatchVec& patches) {
    std::sort(patches.begin(), patches.end(),
              [](const auto& a, const auto& b) { return frac(a.center) < frac(b.center); });
}

Interval map_interval(const Lift& f, const Interval& iv) { return {f.value(iv.lo), f.value(iv.hi)}; }
Interval pull_interval(const Lift& f, const Interval& iv) { return {f.solve(iv.lo), f.solve(iv.hi)}; }

// Blend profile: 1 on [0, 1/2], smoothstep down to 0 at 1.
Jet blend(Real s) {
    Jet t = smoothstep5(2 * (1 - s));
    return {t.value, -2 * t.deriv};
}

}  // namespace

// ---------------------------------------------------------------- Affine

AffinePatchworkNode::AffinePatchworkNode(std::vector<Real> xs, std::vector<Real> ys)
    : xs_(std::move(xs)), ys_(std::move(ys)) {
    if (xs_.size() < 2 || xs_.size() != ys_.size() || xs_.front() != 0 || xs_.back() != 1)
        throw Error(ErrorKind::Precondition, "affine patchwork needs knots 0 = x_0 < ... < x_n = 1");
    if (std::fabs(ys_.back() - ys_.front() - 1) > 1e-15L)
        throw Error(ErrorKind::Precondition, "affine patchwork must have degree one");
    for (std::size_t i = 1; i < xs_.size(); ++i)
        if (!(xs_[i] > xs_[i - 1]) || !(ys_[i] > ys_[i - 1]))
            throw Error(ErrorKind::Precondition, "affine patchwork must be strictly increasing");
}

Jet AffinePatchworkNode::jet(Real x) const {
    Real k = std::floor(x);
    Real u = x - k;
    auto it = std::upper_bound(xs_.begin(), xs_.end(), u);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - xs_.begin()), xs_.size() - 1) - 1;
    Real slope = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    return {k + ys_[i] + slope * (u - xs_[i]), slope};
}

Real AffinePatchworkNode::solve(Real y, const InvertOptions&) const {
    Real k = std::floor(y - ys_.front());
    Real v = y - k;
    auto it = std::upper_bound(ys_.begin(), ys_.end(), v);
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - ys_.begin()), ys_.size() - 1) - 1;
    Real slope = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
    return k + xs_[i] + (v - ys_[i]) / slope;
}

void AffinePatchworkNode::features(std::vector<Interval>& out) const {
    for (std::size_t i = 0; i + 1 < xs_.size(); ++i) out.push_back({xs_[i], xs_[i]});
}

// ---------------------------------------------------------------- Bump

BumpDerivNode::BumpDerivNode(std::vector<Patch> patches, Real delta)
    : patches_(std::move(patches)), bump_(delta) {
    sort_patches(patches_);
    for (const auto& p : patches_)
        if (1 - p.amplitude * delta <= 0)
            throw Error(ErrorKind::Precondition, "bump conjugacy needs 1 - e_j * delta > 0");
}

long BumpDerivNode::locate(Real x, Real& shift) const { return locate_patch(patches_, x, shift); }

Real BumpDerivNode::value(Real x) const {
    Real s = 0;
    long i = locate(x, s);
    if (i < 0) return x;
    const Patch& p = patches_[static_cast<std::size_t>(i)];
    Real t = (x - s - p.center) / (2 * p.half_width);
    return x + p.amplitude * 2 * p.half_width * bump_.antiderivative(t);
}

Jet BumpDerivNode::jet(Real x) const {
    Real s = 0;
    long i = locate(x, s);
    if (i < 0) return {x, 1};
    const Patch& p = patches_[static_cast<std::size_t>(i)];
    Real t = (x - s - p.center) / (2 * p.half_width);
    return {x + p.amplitude * 2 * p.half_width * bump_.antiderivative(t),
            1 + p.amplitude * bump_.value(t)};
}

Real BumpDerivNode::solve(Real y, const InvertOptions& opts) const {
    Real s = 0;
    long i = locate(y, s);
    if (i < 0) return y;
    const Patch& p = patches_[static_cast<std::size_t>(i)];
    Real c = p.center + s;
    return solve_increasing([this](Real t) { return jet(t); }, y, c - p.half_width, c + p.half_width,
                            patch_options(opts, p.half_width, y));
}

void BumpDerivNode::features(std::vector<Interval>& out) const {
    for (const auto& p : patches_) out.push_back({p.center - p.half_width, p.center + p.half_width});
}

// ---------------------------------------------------------------- Density

DensityNode::DensityNode(std::shared_ptr<const BumpPotential> potential, Real xi)
    : potential_(std::move(potential)), xi_(xi) {
    if (!(xi_ > 0)) throw Error(ErrorKind::Precondition, "density normalizer must be positive");
}

Real DensityNode::value(Real x) const {
    Real k = std::floor(x);
    Real u = x - k;
    return k + (u + potential_->excess(u)) / xi_;
}

Jet DensityNode::jet(Real x) const {
    Real k = std::floor(x);
    Real u = x - k;
    return {k + (u + potential_->excess(u)) / xi_, std::exp(potential_->value(u)) / xi_};
}

Real DensityNode::solve(Real y, const InvertOptions& opts) const {
    Real k = std::floor(y);
    Real target = (y - k) * xi_;  // u + E(u) = target
    const auto& cuts = potential_->breakpoints();
    std::size_t nseg = cuts.size() - 1;
    // Cumulative mass at cut i is cuts[i] + prefix[i]; find the segment.
    std::size_t lo = 0, hi = nseg;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (cuts[mid] + potential_->segment_prefix(mid) <= target) lo = mid; else hi = mid;
    }
    std::size_t i = lo;
    Real base = potential_->segment_prefix(i);
    if (potential_->segment_is_flat(i)) return k + target - base;
    auto mass = [this, i, base](Real u) {
        return Jet{u + base + potential_->segment_excess(i, u), std::exp(potential_->value(u))};
    };
    return k + solve_increasing(mass, target, cuts[i], cuts[i + 1], InvertOptions{opts.tol * xi_, opts.max_iter});
}

void DensityNode::features(std::vector<Interval>& out) const {
    for (const auto& t : potential_->terms()) out.push_back(t.support());
}

// ---------------------------------------------------------------- Compose

Jet ComposeNode::jet(Real x) const {
    Jet r = right_.node().jet(x);
    Jet l = left_.node().jet(r.value);
    return {l.value, l.deriv * r.deriv};
}

void ComposeNode::features(std::vector<Interval>& out) const {
    right_.node().features(out);
    for (const auto& iv : left_.features()) out.push_back(pull_interval(right_, iv));
}

// ---------------------------------------------------------------- Inverse

Real InverseNode::value(Real y) const {
    Real x = inner_.solve(y, opts_);
    return x;
}

Jet InverseNode::jet(Real y) const {
    Real x = inner_.solve(y, opts_);
    Jet j = inner_.node().jet(x);
    if (std::fabs(j.value - y) > opts_.tol) {
        std::ostringstream os;
        os << "inverse residual " << static_cast<double>(j.value - y) << " at y=" << static_cast<double>(y);
        throw Error(ErrorKind::InversionFailure, os.str());
    }
    return {x, 1 / j.deriv};
}

void InverseNode::features(std::vector<Interval>& out) const {
    for (const auto& iv : inner_.features()) out.push_back(map_interval(inner_, iv));
}

// ---------------------------------------------------------------- Conjugate

Real ConjugateNode::value(Real x) const {
    return outer_.value(inner_.value(outer_.solve(x)));
}

Jet ConjugateNode::jet(Real x) const {
    Real z = outer_.solve(x);
    Jet dz = outer_.node().jet(z);
    Jet w = inner_.node().jet(z);
    Jet o = outer_.node().jet(w.value);
    return {o.value, o.deriv * w.deriv / dz.deriv};
}

Real ConjugateNode::solve(Real y, const InvertOptions& opts) const {
    return outer_.value(inner_.solve(outer_.solve(y, opts), opts));
}

void ConjugateNode::features(std::vector<Interval>& out) const {
    auto fo = outer_.features();
    for (const auto& iv : fo) {
        out.push_back(map_interval(outer_, iv));
        out.push_back(map_interval(outer_, pull_interval(inner_, iv)));
    }
    for (const auto& iv : inner_.features()) out.push_back(map_interval(outer_, iv));
}

// ---------------------------------------------------------------- Linearizer

OrbitLinearizerNode::OrbitLinearizerNode(Lift base, std::vector<Patch> patches)
    : base_(std::move(base)), patches_(std::move(patches)) {
    sort_patches(patches_);
}

long OrbitLinearizerNode::locate(Real x, Real& shift) const { return locate_patch(patches_, x, shift); }

Jet OrbitLinearizerNode::germ(std::size_t i, Real y) const {
    const Patch& p = patches_[i];
    Jet back = base_.iterate_jet(y, -p.power);
    return {p.center + p.slope * (back.value - p.anchor), p.slope * back.deriv};
}

Jet OrbitLinearizerNode::jet_impl(Real x, bool with_deriv) const {
    Real s = 0;
    long i = locate(x, s);
    if (i < 0) return {x, 1};
    const Patch& p = patches_[static_cast<std::size_t>(i)];
    Real y = x - s;
    Real dist = y - p.center;
    Real r = std::fabs(dist) / p.half_width;
    Jet chi = blend(r);
    if (chi.value == 0) return {x, 1};
    Jet g = germ(static_cast<std::size_t>(i), y);
    Real dev = g.value - y;
    Real value = x + chi.value * dev;
    if (!with_deriv) return {value, 0};
    Real sign = dist >= 0 ? 1 : -1;
    Real deriv = 1 + chi.deriv * sign / p.half_width * dev + chi.value * (g.deriv - 1);
    return {value, deriv};
}

Real OrbitLinearizerNode::solve(Real y, const InvertOptions& opts) const {
    Real s = 0;
    long i = locate(y, s);
    if (i < 0) return y;
    const Patch& p = patches_[static_cast<std::size_t>(i)];
    Real c = p.center + s;
    return solve_increasing([this](Real t) { return jet_impl(t, true); }, y, c - p.half_width,
                            c + p.half_width, patch_options(opts, p.half_width, y));
}

void OrbitLinearizerNode::features(std::vector<Interval>& out) const {
    for (const auto& p : patches_) out.push_back({p.center - p.half_width, p.center + p.half_width});
}

}  // namespace cgreat
