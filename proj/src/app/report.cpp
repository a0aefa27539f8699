#include "cgreat/app/report.hpp"

#include <cmath>

#include "cgreat/core/json_util.hpp"

namespace cgreat::app {

using nlohmann::json;

bool VerificationReport::all_pass(bool strict) const {
    for (const auto& c : checks)
        if (!c.pass || (strict && c.proxy && c.marginal)) return false;
    return true;
}

bool near_upper(double measured, double bound) { return bound > 0 && std::fabs(measured) > 0.9 * bound; }

bool near_lower(double measured, double bound) { return measured < bound / 0.9; }

json versions() {
    return {{"cgreat", CGREAT_VERSION},
            {"nlohmann_json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_MINOR) + "." +
                                  std::to_string(NLOHMANN_JSON_VERSION_PATCH)},
            {"real", "long double, " + std::to_string(std::numeric_limits<Real>::digits) + "-bit mantissa"},
            {"report_digits", 12}};
}

json to_json(const VerificationReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        json e = {{"id", c.id},         {"criterion", c.criterion}, {"anchor", c.anchor},
                  {"measured", c.measured}, {"bound", c.bound},     {"pass", c.pass},
                  {"proxy", c.proxy},   {"marginal", c.marginal}};
        if (!c.note.empty()) e["note"] = c.note;
        checks.push_back(e);
    }
    return {{"checks", checks}, {"config_hash", r.config_hash}, {"versions", versions()}};
}

json timings(const VerificationReport& r) {
    json t = json::object();
    for (const auto& c : r.checks) t[c.id] = rounded(c.runtime_s);
    return t;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace cgreat::app
