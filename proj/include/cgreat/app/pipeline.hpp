#pragma once

#include <map>
#include <memory>
#include <optional>

#include "cgreat/app/config.hpp"
#include "cgreat/twist/twist_map.hpp"

namespace cgreat::app {

/// Lazily computed, cached pipeline artifacts for one configuration.
class Pipeline {
public:
    explicit Pipeline(PipelineConfig cfg) : cfg_(std::move(cfg)) {}

    const PipelineConfig& config() const { return cfg_; }

    /// Tree (with escalation) and the depth-stage map.
    const minimal::Construction& construction();
    const minimal::IntervalTree& tree() { return construction().tree; }
    /// Stage-N map on the construction tree, 0 <= N <= depth.
    const minimal::Stage& stage(long N);
    const minimal::Stage& base() { return stage(cfg_.base_stage); }
    /// h(K-point of word) on the base stage.
    Real base_point();

    /// One perturbation step on the base stage map.
    const perturb::StepResult& step();
    const perturb::SchemeResult& scheme();

    /// Use a map loaded from disk instead of building the base stage.
    void set_base_map(Lift f);
    const Lift& base_map();
    /// Final perturbed map, or base_map() when the scheme has no stages.
    const Lift& final_map();

private:
    PipelineConfig cfg_;
    std::optional<minimal::Construction> construction_;
    std::map<long, minimal::Stage> stages_;
    std::optional<Lift> base_map_;
    std::optional<perturb::StepResult> step_;
    std::optional<perturb::SchemeResult> scheme_;
};

nlohmann::json build_report(Pipeline& p);
nlohmann::json perturb_report(Pipeline& p);

struct TwistArtifacts {
    twist::TwistReport twist;
    twist::DeterminantReport determinant;
    Real invariance = 0;
    Real invariance_half = 0;
    twist::ConjugacyReport conjugacy;
    twist::GraphDiagnostics graph;
};

/// Twist-map checks for circle map f; probes are transported onto the graph.
TwistArtifacts twist_artifacts(const Lift& f, const PipelineConfig& cfg,
                               const std::vector<perturb::ProbeResult>& probes = {});
nlohmann::json to_json(const TwistArtifacts& t);

/// Deterministic sample points in [lo, hi) from the configured seed.
std::vector<Real> seeded_points(std::size_t n, std::uint64_t seed, Real lo = 0, Real hi = 1);

}  // namespace cgreat::app
