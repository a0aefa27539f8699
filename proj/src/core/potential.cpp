#include "cgreat/core/potential.hpp"

#include <algorithm>
#include <cmath>

#include "cgreat/core/bumps.hpp"
#include "cgreat/core/quadrature.hpp"

namespace cgreat {

BumpPotential::BumpPotential(std::vector<BumpTerm> terms, Real quad_tol)
    : terms_(std::move(terms)), quad_tol_(quad_tol) {
    cuts_ = {0, 1};
    for (auto& t : terms_) {
        t.center = frac(t.center);
        for (Real off : {Real(-0.5), Real(-0.25), Real(0.25), Real(0.5)}) {
            Real c = t.center + off * t.length;
            cuts_.push_back(frac(c));
        }
    }
    std::sort(cuts_.begin(), cuts_.end());
    cuts_.erase(std::unique(cuts_.begin(), cuts_.end()), cuts_.end());
    if (cuts_.back() != 1) cuts_.push_back(1);

    std::size_t nseg = cuts_.size() - 1;
    active_.assign(nseg, {});
    for (std::size_t i = 0; i < nseg; ++i) {
        Real mid = (cuts_[i] + cuts_[i + 1]) / 2;
        for (std::size_t k = 0; k < terms_.size(); ++k) {
            Real d = std::fabs(wrap(mid - terms_[k].center));
            if (d < terms_[k].length / 2) active_[i].push_back(k);
        }
    }
    prefix_.assign(nseg + 1, 0);
    for (std::size_t i = 0; i < nseg; ++i)
        prefix_[i + 1] = prefix_[i] + segment_excess(i, cuts_[i + 1]);
}

std::size_t BumpPotential::segment_of(Real u) const {
    auto it = std::upper_bound(cuts_.begin(), cuts_.end(), u);
    std::size_t i = it == cuts_.begin() ? 0 : static_cast<std::size_t>(it - cuts_.begin()) - 1;
    return std::min(i, cuts_.size() - 2);
}

Jet BumpPotential::segment_jet(std::size_t i, Real u) const {
    Jet out;
    for (std::size_t k : active_[i]) {
        const BumpTerm& t = terms_[k];
        Jet b = PlateauBump::eval(wrap(u - t.center) / t.length);
        out.value += t.amplitude * b.value;
        out.deriv += t.amplitude * b.deriv / t.length;
    }
    return out;
}

Jet BumpPotential::jet(Real x) const {
    Real u = frac(x);
    return segment_jet(segment_of(u), u);
}

Real BumpPotential::segment_excess(std::size_t i, Real u) const {
    if (active_[i].empty() || u <= cuts_[i]) return 0;
    return integrate([this, i](Real s) { return std::expm1(segment_jet(i, s).value); },
                     cuts_[i], u, quad_tol_);
}

Real BumpPotential::excess(Real u) const {
    if (u >= 1) return prefix_.back();
    if (u <= 0) return 0;
    std::size_t i = segment_of(u);
    return prefix_[i] + segment_excess(i, u);
}

}  // namespace cgreat
