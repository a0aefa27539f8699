#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cgreat/minimal/construct.hpp"
#include "cgreat/perturb/scheme.hpp"

namespace cgreat::app {

struct Tolerances {
    std::size_t grid = 10000;              // C1 and certificate grids
    std::size_t identity_samples = 1000;   // per perturbation window
    std::size_t check_points = 1000;       // twist and identity scans
    std::size_t fd_points = 100;           // finite-difference oracle
    long rotation_iterations = 10000;
};

struct PipelineConfig {
    minimal::MinimalConfig minimal;
    long base_stage = 2;          // stage map fed to the perturbation scheme
    std::string word = "ll";      // K-point word of the base point
    perturb::SchemeConfig scheme;
    Tolerances tol;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
};

/// Defaults, overridden by the keys present in j. base_stage defaults to
/// min(2, depth) and word to base_stage copies of 'l'. Unknown keys, wrong types
/// and out-of-range values raise ErrorKind::Config.
PipelineConfig parse_config(const nlohmann::json& j);
void validate_config(const PipelineConfig& cfg);
PipelineConfig load_config(const std::string& path);
PipelineConfig default_config();

/// Fully resolved configuration (every key present).
nlohmann::json to_json(const PipelineConfig& cfg);

/// FNV-1a 64 of the resolved configuration, as 16 hex digits.
std::string config_hash(const PipelineConfig& cfg);

}  // namespace cgreat::app
