#pragma once

#include <functional>

#include "cgreat/app/pipeline.hpp"
#include "cgreat/app/report.hpp"

namespace cgreat::app {

/// Runs the acceptance checks in order (all twelve when only is empty).
/// Failures inside a check (exceptions included) mark that check failed and
/// the suite continues. on_check, when set, is called after each check.
VerificationReport run_acceptance(Pipeline& p, const std::vector<int>& only = {},
                                  const std::function<void(const Check&)>& on_check = {});

/// "PASS"/"FAIL"/"MARGINAL" line for one check.
std::string summary_line(const Check& c, bool strict);

}  // namespace cgreat::app
