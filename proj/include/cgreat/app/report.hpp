#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace cgreat::app {

/// One named verification result. measured and bound hold numbers already
/// rounded for serialisation.
struct Check {
    std::string id;
    int criterion = 0;
    std::string anchor;
    nlohmann::json measured = nlohmann::json::object();
    nlohmann::json bound = nlohmann::json::object();
    bool pass = false;
    bool proxy = false;     // finite-horizon or finite-grid surrogate
    bool marginal = false;  // passed within 10% of a bound
    std::string note;
    double runtime_s = 0;   // kept out of the report so it stays byte-stable
};

struct VerificationReport {
    std::vector<Check> checks;
    std::string config_hash;

    bool all_pass(bool strict) const;
};

/// True when a passing measurement lies within 10% of its bound (ratio
/// measured / bound above 0.9 for upper bounds, below 1/0.9 for lower ones).
bool near_upper(double measured, double bound);
bool near_lower(double measured, double bound);

nlohmann::json versions();
nlohmann::json to_json(const VerificationReport& r);
nlohmann::json timings(const VerificationReport& r);

/// Pretty-printed JSON followed by a newline.
std::string dump(const nlohmann::json& j);

}  // namespace cgreat::app
