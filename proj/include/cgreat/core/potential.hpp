#pragma once

#include <string>
#include <vector>

#include "cgreat/core/types.hpp"

namespace cgreat {

/// One scaled plateau bump on the circle: amplitude * phi((x - center) / length).
struct BumpTerm {
    Real center = 0;     // in [0, 1)
    Real length = 0;     // support length
    Real amplitude = 0;  // includes the level weight
    int level = 0;       // bookkeeping only
    int shift = 0;       // translate index k
    std::string word;    // bookkeeping only

    Interval support() const { return {center - length / 2, center + length / 2}; }
};

/// Periodic potential built as a finite sum of plateau bumps.
///
/// The unit interval is cut at every support endpoint and plateau edge, so the
/// integrand exp(potential) is polynomial-smooth on each segment. Integrals of
/// expm1(potential) are accumulated per segment for the density diffeomorphism.
class BumpPotential {
public:
    BumpPotential() : BumpPotential(std::vector<BumpTerm>{}) {}
    explicit BumpPotential(std::vector<BumpTerm> terms, Real quad_tol = 1e-14L);

    const std::vector<BumpTerm>& terms() const { return terms_; }

    Real value(Real x) const { return jet(x).value; }
    Jet jet(Real x) const;

    /// Sorted cut points in [0, 1], starting at 0 and ending at 1.
    const std::vector<Real>& breakpoints() const { return cuts_; }

    /// Integral of expm1(potential) over [0, u] for u in [0, 1].
    Real excess(Real u) const;
    /// Integral of expm1(potential) over the whole circle.
    Real total_excess() const { return prefix_.back(); }

    /// Index of the segment [cuts[i], cuts[i+1]) containing u in [0, 1].
    std::size_t segment_of(Real u) const;
    bool segment_is_flat(std::size_t i) const { return active_[i].empty(); }
    Real segment_prefix(std::size_t i) const { return prefix_[i]; }
    /// Integral of expm1(potential) over [cuts[i], u].
    Real segment_excess(std::size_t i, Real u) const;

    bool is_zero() const { return terms_.empty(); }
    Real quadrature_tolerance() const { return quad_tol_; }

private:
    Jet segment_jet(std::size_t i, Real u) const;

    std::vector<BumpTerm> terms_;
    std::vector<Real> cuts_;
    std::vector<std::vector<std::size_t>> active_;
    std::vector<Real> prefix_;
    Real quad_tol_;
};

}  // namespace cgreat
