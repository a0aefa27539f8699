#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cgreat/core/errors.hpp"
#include "cgreat/core/types.hpp"

namespace cgreat {

/// Exact round-trip encoding of an extended-precision value (decimal string).
inline nlohmann::json exact(Real x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.21Lg", x);
    return std::string(buf);
}

inline Real read_real(const nlohmann::json& j) {
    if (j.is_number()) return static_cast<Real>(j.get<double>());
    if (j.is_string()) return std::strtold(j.get<std::string>().c_str(), nullptr);
    throw Error(ErrorKind::Serialization, "expected a number, got " + j.dump());
}

/// Report value: rounded to 12 significant digits so reports are byte-stable.
inline double rounded(Real x) {
    if (!std::isfinite(static_cast<double>(x))) return static_cast<double>(x);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", x);
    return std::strtod(buf, nullptr);
}

inline nlohmann::json rounded(const std::vector<Real>& xs) {
    nlohmann::json a = nlohmann::json::array();
    for (Real x : xs) a.push_back(rounded(x));
    return a;
}

}  // namespace cgreat
