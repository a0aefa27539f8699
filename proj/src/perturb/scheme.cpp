#include "cgreat/perturb/scheme.hpp"

#include <cmath>

#include "cgreat/core/json_util.hpp"

namespace cgreat::perturb {

SchemeResult scheme_iterate(const Lift& f0, Real x0, const SchemeConfig& cfg) {
    if (cfg.stages < 0) throw Error(ErrorKind::Precondition, "stages must be >= 0");
    SchemeResult out;
    out.F = f0;
    out.x_bar = x0;
    StepConfig step = cfg.step;
    for (int n = 1; n <= cfg.stages; ++n) {
        if (n > 1) {
            Real u = out.probes.back().u;
            step.epsilon *= cfg.epsilon_ratio;
            step.macro_scale = std::min(step.macro_scale, u / 10);
            step.linearizer.width_cap = std::min(step.linearizer.width_cap, u / 20);
            if (cfg.reuse_windows) step.windows = out.reports.front().windows;
        }
        StepResult r = apply_step(out.F, out.x_bar, step);
        out.F = r.g;
        out.x_bar = r.report.y;
        out.probes.push_back(r.report.probe);
        out.reports.push_back(std::move(r.report));
    }
    for (const auto& p : out.probes) {
        ProbeResult q = recheck_probe(out.F, p);
        out.ok = out.ok && q.found;
        out.final_probes.push_back(q);
    }
    return out;
}

nlohmann::json to_json(const SchemeResult& r) {
    nlohmann::json steps = nlohmann::json::array(), probes = nlohmann::json::array();
    for (const auto& s : r.reports) steps.push_back(to_json(s));
    for (const auto& p : r.final_probes) probes.push_back(to_json(p));
    return {{"stages", r.reports.size()}, {"x_bar", rounded(r.x_bar)}, {"steps", steps},
            {"final_probes", probes}, {"ok", r.ok}};
}

}  // namespace cgreat::perturb
