#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "cgreat/perturb/step.hpp"

namespace cgreat::perturb {

struct SchemeConfig {
    StepConfig step;
    int stages = 2;
    Real epsilon_ratio = 0.5L;  // eps_n = eps_1 ratio^(n-1)
    bool reuse_windows = true;  // stages n >= 2 keep the first stage's (N, N')
};

struct SchemeResult {
    Lift F;
    Real x_bar = 0;
    std::vector<ProbeResult> probes;        // as recorded at each stage
    std::vector<ProbeResult> final_probes;  // rechecked on F
    std::vector<StepReport> reports;
    bool ok = true;  // every recorded probe still passes on F
};

/// Iterated steps from (f0, x0). Stage n >= 2 keeps all supports and probe
/// scales below u_{n-1} / 10 so earlier probes see the same map.
SchemeResult scheme_iterate(const Lift& f0, Real x0, const SchemeConfig& cfg);

nlohmann::json to_json(const SchemeResult& r);

}  // namespace cgreat::perturb
