#include "cgreat/core/quadrature.hpp"

#include <boost/math/quadrature/gauss.hpp>

#include <cmath>
#include <sstream>

#include "cgreat/core/errors.hpp"

namespace cgreat {

namespace {

using Rule = boost::math::quadrature::gauss<Real, 30>;

constexpr int kMaxDepth = 14;

// Error estimate: difference between the rule on [a, b] and on its halves.
Real refine(const std::function<Real(Real)>& f, Real a, Real b, Real whole, Real tol, int depth,
            Real& err) {
    Real m = (a + b) / 2;
    Real left = Rule::integrate(f, a, m);
    Real right = Rule::integrate(f, m, b);
    Real diff = std::fabs(left + right - whole);
    if (diff <= tol || depth >= kMaxDepth) {
        err += diff;
        return left + right;
    }
    return refine(f, a, m, left, tol / 2, depth + 1, err) + refine(f, m, b, right, tol / 2, depth + 1, err);
}

}  // namespace

Real integrate(const std::function<Real(Real)>& f, Real a, Real b, Real abs_tol) {
    if (b <= a) return 0;
    Real err = 0;
    Real value = refine(f, a, b, Rule::integrate(f, a, b), abs_tol, 0, err);
    if (!(err <= abs_tol) && !(err <= std::fabs(value) * 1e-12L)) {
        std::ostringstream os;
        os << "error estimate " << static_cast<double>(err) << " above tolerance "
           << static_cast<double>(abs_tol) << " on [" << static_cast<double>(a) << ", "
           << static_cast<double>(b) << "]";
        throw Error(ErrorKind::Quadrature, os.str());
    }
    return value;
}

}  // namespace cgreat
