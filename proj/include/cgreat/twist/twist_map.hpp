#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "cgreat/core/lift.hpp"
#include "cgreat/core/orbit.hpp"
#include "cgreat/perturb/step.hpp"

namespace cgreat::twist {

/// Candidate defect functions built from a circle map f.
enum class DefectForm {
    Corrected,  // f(x) + f^-1(x) - 2x
    Half,       // (f(x) + f^-1(x)) / 2
};

const char* to_string(DefectForm form);

/// Defect phi for the given form, with derivative.
Function1D build_defect(const Lift& f, DefectForm form = DefectForm::Corrected);

struct AnnulusPoint {
    Real theta = 0;
    Real r = 0;
};

struct Matrix2 {
    Real a = 1, b = 0, c = 0, d = 1;
    Real det() const { return a * d - b * c; }
};

/// (theta, r) -> (theta + r, r + phi(theta + r)).
class TwistMap {
public:
    explicit TwistMap(Lift f, DefectForm form = DefectForm::Corrected);

    const Lift& source() const { return f_; }
    const Function1D& defect() const { return phi_; }
    DefectForm form() const { return form_; }

    /// Lift action: theta stays real.
    AnnulusPoint apply_lift(AnnulusPoint p) const;
    /// Quotient action: theta reduced to [0, 1).
    AnnulusPoint apply(AnnulusPoint p) const;

    /// Closed form [[1, 1], [Dphi, 1 + Dphi]] at theta + r.
    Matrix2 jacobian(AnnulusPoint p) const;
    /// Central differences with step eta in both coordinates.
    Matrix2 numeric_jacobian(AnnulusPoint p, Real eta = 1e-6L) const;

private:
    Lift f_;
    DefectForm form_;
    Function1D phi_;
};

/// Graph of psi = f - id.
class InvariantGraph {
public:
    explicit InvariantGraph(Lift f) : f_(std::move(f)) {}
    Real psi(Real theta) const { return f_(theta) - theta; }
    Real dpsi(Real theta) const { return f_.deriv(theta) - 1; }
    /// theta + psi(theta), used to transport probes onto the graph.
    Real graph_lift(Real theta) const { return theta + psi(theta); }
    const Lift& source() const { return f_; }

private:
    Lift f_;
};

struct TwistReport {
    Real algebraic_twist = 1;
    Real fd_twist_min = 0;
    Real fd_twist_max = 0;
    bool monotone = false;
    std::size_t points = 0;
    bool ok = false;
};

/// Finite-difference twist on thetas x r_grid, monotonicity of r -> theta'.
TwistReport twist_check(const TwistMap& g, const std::vector<Real>& thetas, Real r_lo = -2, Real r_hi = 2,
                        std::size_t r_steps = 41, Real eta = 1e-6L, Real tol = 1e-9L);

struct DeterminantReport {
    Real closed_form_max_dev = 0;
    Real numeric_max_dev = 0;
    Real fd_entry_max_dev = 0;  // numeric vs closed-form Jacobian entries
    std::size_t points = 0;
};

DeterminantReport determinant_check(const TwistMap& g, const std::vector<AnnulusPoint>& points,
                                    Real eta = 1e-6L);

/// max over thetas of |g(theta, psi(theta)) - (f(theta), psi(f(theta)))|.
Real invariance_residual(const TwistMap& g, const InvariantGraph& graph, const std::vector<Real>& thetas);

struct ConjugacyReport {
    Real projection_error = 0;  // max |pi g(theta, psi(theta)) - f(theta)|
    Real rotation_on_graph = 0;
    Real rotation_of_f = 0;
    long iterations = 0;
    Real rotation_gap = 0;
    Real rotation_tol = 0;  // 2 / n
    bool ok = false;
};

ConjugacyReport restricted_conjugacy_check(const TwistMap& g, const InvariantGraph& graph,
                                           const std::vector<Real>& thetas, Real theta0, long n,
                                           Real projection_tol = 1e-10L);

struct LipschitzLevel {
    int log2_grid = 0;
    Real max_slope = 0;
};

struct GraphDiagnostics {
    std::vector<LipschitzLevel> levels;
    Real feature_slope = 0;  // sup |dpsi| at feature samples
    Real lipschitz = 0;
    Real refinement_spread = 0;  // (max - min) / max over levels
    std::vector<DeltaProbe> graph_probes;
    Real probe_max_dev = 0;  // vs the recorded map probes
};

GraphDiagnostics graph_diagnostics(const InvariantGraph& graph, const std::vector<perturb::ProbeResult>& probes,
                                   int min_log2 = 10, int max_log2 = 14);

nlohmann::json to_json(const TwistReport& r);
nlohmann::json to_json(const DeterminantReport& r);
nlohmann::json to_json(const ConjugacyReport& r);
nlohmann::json to_json(const GraphDiagnostics& r);

}  // namespace cgreat::twist
