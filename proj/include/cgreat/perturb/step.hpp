#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgreat/core/lift.hpp"
#include "cgreat/core/orbit.hpp"
#include "cgreat/perturb/schedule.hpp"

namespace cgreat::perturb {

struct LinearizerOptions {
    Real initial_half_width = 0;  // 0: a quarter of the minimum orbit gap
    Real width_cap = INFINITY;    // upper bound on the half-width of I_0
    int max_halvings = 40;
    Real floor_width = 1e-16L;  // stage-2 patches sit near 5e-13 at eps = 1e-2
    std::size_t samples_per_interval = 1000;
};

/// Orbit linearizer h' with patches I_j = [p_j -+ rho_0 Df^j(x)] for
/// -N' + 1 <= j <= N + 1, and f' = h' o f o h'^-1.
struct Linearizer {
    Lift h;
    Lift f_lin;
    long N = 0;
    long N_prime = 0;
    Real rho0 = 0;     // half-width of I_0
    std::vector<Interval> patches;  // I_j, index j + N' - 1
    Real max_deriv_dev = 0;         // sup |Dh' - 1| over the scan
    int halvings = 0;
};

Linearizer build_linearizer(const Lift& f, const CocycleSchedule& s, long N, long N_prime, Real delta,
                            const LinearizerOptions& opts = {});

/// Largest centred I'_0 (half-width) whose affine images p_j + Df^j(x) t stay
/// in the cores of f' for -N' <= j <= N + 1, verified by endpoint iteration.
struct AffineCore {
    Real half_width = 0;
    std::vector<Interval> intervals;  // I'_j for -N' <= j <= N + 1, index j + N'
    Real endpoint_error = 0;          // max |f'^j(p_0 -+ r) - (p_j -+ r Df^j(x))|
    Real slope_error = 0;             // max |Df' - b_j| / b_j on the cores
};

AffineCore select_affine_core(const Linearizer& lin, const CocycleSchedule& s);

/// Dh = 1 + e_j phi_delta(A_j) on I'_j for -N' + 1 <= j <= N.
Lift build_bump_conjugacy(const EStaircase& e, const AffineCore& core, long N_prime, Real delta);

struct ProbeResult {
    Real x = 0;
    Real u = 0;
    Real v = 0;
    Real raw = 1;        // (v/u) (g(x+u) - g(x)) / (g(x+v) - g(x))
    Real distortion = 1; // max(raw, 1/raw)
    Real threshold = 1;  // 1 + margin * eps0
    bool found = false;
    std::vector<DeltaProbe> scan;
};

/// Dyadic scan u = core_width 2^-k, v = base_width 2^k (v < macro_scale).
/// Returns the largest u (then smallest v) among the pairs whose |ln Delta| is
/// at least half the best one found.
ProbeResult find_uv(const Lift& g, Real x, Real core_width, Real base_width, Real eps0, Real margin = 0.25L,
                    Real macro_scale = 0.05L, int max_k = 24);

/// Largest dyadic v <= cap such that the secant slopes of f over [x, x -+ w]
/// stay within rel_tol of Df(x) for every dyadic w <= v.
Real linearity_scale(const Lift& f, Real x, Real rel_tol, Real cap = 0.25L);

/// Distortion of an already chosen probe on another map.
ProbeResult recheck_probe(const Lift& g, const ProbeResult& probe);

struct TransferOptions {
    std::size_t samples = 64;
    Real neighborhood = 1e-3L;  // samples drawn uniformly in [x - w, x + w]
    long horizon = 200;
    long m = 100;
    Real lambda = 0;           // 0: C / 10
    Real Lambda = 0;           // 0: 2 (1 + sup e)
    std::uint64_t seed = 1;
};

struct TransferReport {
    std::size_t samples = 0;
    std::size_t pass_sum = 0;
    std::size_t pass_tail = 0;
    std::size_t pass_avoid = 0;
    std::size_t pass_all = 0;
    Real fraction = 0;
    bool base_point_avoids = true;   // expected false
    Real max_cocycle_mismatch = 0;   // |Dg^n - Df^n| / Df^n for avoiding orbits
    Real conjugacy_deriv_max = 0;    // sup D(h o h')
    Real conjugacy_deriv_bound = 0;  // (1 + delta)(1 + sup e)
};

TransferReport transfer_check(const Lift& f, const Lift& g, const Lift& H, const std::vector<Interval>& supports,
                              Real x, Real C, Real delta, Real sup_e, const TransferOptions& opts = {});

struct StepConfig {
    Real C = 10;
    Real epsilon = 1e-2L;
    Real smallness = 0.05L;
    Real largeness = 5;
    long horizon = 200;
    Real probe_margin = 0.25L;
    Real macro_scale = 0.05L;
    Real delta = 0;  // 0: min(eps / 10, 1 / (4 (1 + sup e)))
    Real growth_threshold = 10;
    std::optional<Windows> windows;  // fixed windows instead of choose_windows
    LinearizerOptions linearizer;
    std::size_t identity_samples = 1000;  // per I'_j
    std::size_t c1_grid = 10000;
    bool require_cgood = true;
    bool require_closeness = true;
    TransferOptions transfer;
};

struct StepReport {
    Real x = 0;
    Real y = 0;                  // (h o h')(x)
    Real epsilon = 0;
    Real C = 0;
    Real C_prime = 0;
    Real eps0 = 0;
    Real delta = 0;
    Windows windows;
    Real sup_e = 0;
    Real e0 = 0;
    Real b0 = 0;
    bool cgood_precondition = false;
    CGoodProfile profile;
    Real symsum_deriv_sup = 0;   // sup D(f + f^-1)
    Real linear_scale = 0;       // probe macro scale actually used
    Real rho0 = 0;
    Real core_half_width = 0;
    Real linearizer_deriv_dev = 0;
    Real core_slope_error = 0;
    Real recurrence_error = 0;
    Real c0_distance = 0;        // h o h' from identity
    Real c1_distance = 0;        // g + g^-1 from f + f^-1
    bool c0_ok = false;
    bool c1_ok = false;
    Real drop = 0;               // Dg(x) - Df(x)
    Real drop_predicted = 0;     // -b_0 / (1 + e_0)
    Real identity_error = 0;     // max |DG - DF' - kappa r_j / ((1 + e_j kappa) b_{j-1})|
    Real outside_mismatch = 0;   // max |g - f| away from the supports
    Real fixed_point_displacement = 0;
    ProbeResult probe;
    TransferReport transfer;
    std::vector<Residual> residuals;
};

struct StepResult {
    Lift g;
    Lift H;  // h o h'
    Linearizer linearizer;
    AffineCore core;
    Lift bump;
    CocycleSchedule schedule;
    EStaircase e;
    StepReport report;
};

/// One perturbation step at base point x. Throws Precondition (C-good proxy)
/// and ClosenessFailure when the corresponding checks are required.
StepResult apply_step(const Lift& f, Real x, const StepConfig& cfg);

nlohmann::json to_json(const StepReport& r);
nlohmann::json to_json(const ProbeResult& p);

}  // namespace cgreat::perturb
