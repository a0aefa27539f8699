#include "cgreat/app/pipeline.hpp"

#include <random>

#include "cgreat/core/json_util.hpp"

namespace cgreat::app {

using nlohmann::json;

const minimal::Construction& Pipeline::construction() {
    if (!construction_) construction_ = minimal::construct(cfg_.minimal);
    return *construction_;
}

const minimal::Stage& Pipeline::stage(long N) {
    const auto& c = construction();
    if (N < 0 || N > c.tree.depth()) throw Error(ErrorKind::Precondition, "stage outside [0, depth]");
    if (N == c.tree.depth()) return c.stage;
    auto it = stages_.find(N);
    if (it == stages_.end()) it = stages_.emplace(N, minimal::build_stage(c.tree, N, cfg_.minimal.quad_tol)).first;
    return it->second;
}

Real Pipeline::base_point() {
    const auto& s = base();
    return s.h(minimal::k_point(tree(), minimal::Word{cfg_.word}));
}

void Pipeline::set_base_map(Lift f) {
    base_map_ = std::move(f);
    step_.reset();
    scheme_.reset();
}

const Lift& Pipeline::base_map() {
    if (!base_map_) base_map_ = base().f;
    return *base_map_;
}

const perturb::StepResult& Pipeline::step() {
    if (!step_) step_ = perturb::apply_step(base_map(), base_point(), cfg_.scheme.step);
    return *step_;
}

const perturb::SchemeResult& Pipeline::scheme() {
    if (!scheme_) scheme_ = perturb::scheme_iterate(base_map(), base_point(), cfg_.scheme);
    return *scheme_;
}

const Lift& Pipeline::final_map() { return cfg_.scheme.stages == 0 ? base_map() : scheme().F; }

json build_report(Pipeline& p) {
    json j = minimal::build_report(p.construction());
    j["base_stage"] = p.config().base_stage;
    j["word"] = p.config().word;
    j["base_point"] = rounded(p.base_point());
    return j;
}

json perturb_report(Pipeline& p) { return perturb::to_json(p.scheme()); }

std::vector<Real> seeded_points(std::size_t n, std::uint64_t seed, Real lo, Real hi) {
    // mt19937_64 output is fixed by the standard; the conversion to [0, 1) is done
    // by hand because distribution algorithms are implementation-defined
    std::mt19937_64 rng(seed);
    std::vector<Real> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        Real u = static_cast<Real>(rng() >> 11) / static_cast<Real>(1ull << 53);
        out.push_back(lo + (hi - lo) * u);
    }
    return out;
}

TwistArtifacts twist_artifacts(const Lift& f, const PipelineConfig& cfg,
                               const std::vector<perturb::ProbeResult>& probes) {
    TwistArtifacts t;
    twist::TwistMap g(f);
    twist::InvariantGraph graph(f);
    std::size_t n = cfg.tol.check_points;
    std::vector<Real> grid;
    for (std::size_t i = 0; i < n; ++i) grid.push_back((static_cast<Real>(i) + 0.5L) / static_cast<Real>(n));

    auto th = seeded_points(n, cfg.seed, 0, 1);
    auto rs = seeded_points(n, cfg.seed + 1, -2, 2);
    std::vector<twist::AnnulusPoint> pts;
    for (std::size_t i = 0; i < n; ++i) pts.push_back({th[i], rs[i]});
    t.determinant = twist::determinant_check(g, pts);
    t.twist = twist::twist_check(g, seeded_points(20, cfg.seed + 2));
    t.invariance = twist::invariance_residual(g, graph, grid);
    t.invariance_half = twist::invariance_residual(twist::TwistMap(f, twist::DefectForm::Half), graph, grid);
    t.conjugacy = twist::restricted_conjugacy_check(g, graph, grid, 0, cfg.tol.rotation_iterations);
    t.graph = twist::graph_diagnostics(graph, probes);
    return t;
}

json to_json(const TwistArtifacts& t) {
    return {{"twist", twist::to_json(t.twist)},
            {"determinant", twist::to_json(t.determinant)},
            {"invariance_residual", rounded(t.invariance)},
            {"invariance_residual_half_defect", rounded(t.invariance_half)},
            {"conjugacy", twist::to_json(t.conjugacy)},
            {"graph", twist::to_json(t.graph)}};
}

}  // namespace cgreat::app
