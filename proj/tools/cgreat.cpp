// Command-line driver: build | perturb | twist | verify | export.
// Exit codes: 0 pass, 2 config error, 3 pipeline error, 4 verification failure.
#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "cgreat/app/acceptance.hpp"
#include "cgreat/app/export.hpp"
#include "cgreat/core/json_util.hpp"

using namespace cgreat;
using nlohmann::json;

namespace {

constexpr int kPass = 0, kConfig = 2, kPipeline = 3, kVerify = 4;

struct Options {
    std::string verb;
    std::string config;
    std::string out;
    long stage = -1;
    std::uint64_t seed = 0;
    bool seed_given = false;
    bool strict = false;
    std::string what = "all";
};

app::PipelineConfig resolve(const Options& o) {
    app::PipelineConfig cfg = o.config.empty() ? app::default_config() : app::load_config(o.config);
    if (!o.out.empty()) cfg.out_dir = o.out;
    if (o.seed_given) {
        cfg.seed = o.seed;
        cfg.scheme.step.transfer.seed = o.seed;
    }
    if (o.stage >= 0) {
        cfg.base_stage = o.stage;
        if (static_cast<long>(cfg.word.size()) != o.stage) cfg.word = std::string(static_cast<std::size_t>(o.stage), 'l');
    }
    app::validate_config(cfg);
    return cfg;
}

void write(const std::string& dir, const std::string& name, const json& j) {
    std::filesystem::create_directories(dir);
    std::ofstream((std::filesystem::path(dir) / name).string(), std::ios::binary) << app::dump(j);
}

json envelope(const app::VerificationReport& rep, const std::string& key, json details) {
    json j = app::to_json(rep);
    j[key] = std::move(details);
    return j;
}

int finish(const app::VerificationReport& rep, bool strict, bool gate) {
    for (const auto& c : rep.checks) std::cout << app::summary_line(c, strict) << "\n";
    return gate && !rep.all_pass(strict) ? kVerify : kPass;
}

json map_file(const app::PipelineConfig& cfg, const Lift& f, const std::string& role) {
    return {{"config_hash", app::config_hash(cfg)}, {"role", role}, {"map", f.to_json()}};
}

/// Map saved by an earlier run with the same configuration, if any.
std::optional<Lift> load_map(const app::PipelineConfig& cfg, const std::string& name) {
    auto path = std::filesystem::path(cfg.out_dir) / name;
    if (!std::filesystem::exists(path)) return std::nullopt;
    std::ifstream in(path);
    json j = json::parse(in);
    if (j.value("config_hash", "") != app::config_hash(cfg)) return std::nullopt;
    return Lift::from_json(j.at("map"));
}

int run(const Options& o) {
    app::PipelineConfig cfg = resolve(o);
    app::Pipeline p(cfg);
    const std::string& out = cfg.out_dir;

    if (o.verb == "build") {
        json details = app::build_report(p);
        auto rep = app::run_acceptance(p, {6, 7, 8});
        write(out, "build_report.json", envelope(rep, "build", details));
        write(out, "map_f.json", map_file(cfg, p.base_map(), "base stage map"));
        write(out, "map_stage.json", map_file(cfg, p.construction().stage.f, "depth stage map"));
        return finish(rep, o.strict, false);
    }
    if (o.verb == "perturb") {
        if (auto f = load_map(cfg, "map_f.json")) p.set_base_map(*f);
        try {
            const auto& sc = p.scheme();
            auto rep = app::run_acceptance(p, {3, 4, 5});
            write(out, "perturb_report.json", envelope(rep, "scheme", perturb::to_json(sc)));
            write(out, "map_F.json", map_file(cfg, sc.F, "perturbed map"));
            return finish(rep, o.strict, false);
        } catch (const Error& e) {
            json partial = {{"error", e.what()}, {"kind", to_string(e.kind())}};
            try {
                partial["first_step"] = perturb::to_json(p.step().report);
            } catch (const Error& inner) {
                partial["first_step_error"] = inner.what();
            }
            app::VerificationReport empty;
            empty.config_hash = app::config_hash(cfg);
            write(out, "perturb_report.json", envelope(empty, "scheme", partial));
            throw;
        }
    }
    if (o.verb == "twist") {
        std::optional<Lift> F = load_map(cfg, "map_F.json");
        const Lift& f = F ? *F : p.final_map();
        std::vector<perturb::ProbeResult> probes;
        if (!F && cfg.scheme.stages > 0) probes = p.scheme().final_probes;
        auto art = app::twist_artifacts(f, cfg, probes);
        auto rep = app::run_acceptance(p, {9, 10});
        write(out, "twist_report.json", envelope(rep, "twist", app::to_json(art)));
        app::export_phase_portrait(f, out);
        app::export_invariant_graph(f, out);
        return finish(rep, o.strict, false);
    }
    if (o.verb == "verify") {
        auto rep = app::run_acceptance(p);
        write(out, "verification_report.json", app::to_json(rep));
        write(out, "timings.json", app::timings(rep));
        return finish(rep, o.strict, true);
    }
    if (o.verb == "export") {
        if (auto f = load_map(cfg, "map_f.json")) p.set_base_map(*f);
        for (const auto& path : app::run_export(p, o.what, out)) std::cout << path << "\n";
        return kPass;
    }
    throw Error(ErrorKind::Config, "unknown verb " + o.verb);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App cli{"Minimal circle maps with non-differentiable invariant graphs of twist maps"};
    Options o;
    cli.require_subcommand(1, 1);
    cli.add_option("--config", o.config, "pipeline configuration (JSON)");
    cli.add_option("--out", o.out, "output directory (overrides the config)");
    cli.add_option("--stage", o.stage, "stage map fed to the perturbation scheme")->check(CLI::NonNegativeNumber);
    auto* seed = cli.add_option("--seed", o.seed, "seed for sample selection");
    cli.add_flag("--strict", o.strict, "treat marginal passes of proxy checks as failures");
    cli.fallthrough();
    for (const char* verb : {"build", "perturb", "twist", "verify"}) cli.add_subcommand(verb, "")->fallthrough();
    auto* exp = cli.add_subcommand("export", "write CSV tables")->fallthrough();
    exp->add_option("what", o.what, "map | potential | schedule | delta | graph | portrait | all");
    cli.get_subcommand("build")->description("construct the stage maps");
    cli.get_subcommand("perturb")->description("run the perturbation scheme");
    cli.get_subcommand("twist")->description("lift to the annulus twist map and check it");
    cli.get_subcommand("verify")->description("run all acceptance checks");

    try {
        cli.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = cli.exit(e);
        return code == 0 ? kPass : kConfig;
    }
    o.seed_given = seed->count() > 0;
    o.verb = cli.get_subcommands().front()->get_name();
    try {
        return run(o);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return e.kind() == ErrorKind::Config ? kConfig : kPipeline;
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "Serialization: " << e.what() << "\n";
        return kPipeline;
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return kPipeline;
    }
}
