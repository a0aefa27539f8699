// Acceptance suite: one line per criterion, exit code 0 iff all pass.
// Optional arguments: a config path, then a directory for the JSON report.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "cgreat/app/acceptance.hpp"

using namespace cgreat;

int main(int argc, char** argv) {
    app::PipelineConfig cfg;
    try {
        cfg = argc > 1 && argv[1][0] != 0 ? app::load_config(argv[1]) : app::default_config();
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
    app::Pipeline p(cfg);
    auto rep = app::run_acceptance(p, {}, [](const app::Check& c) { std::cout << app::summary_line(c, false) << std::endl; });
    std::size_t passed = 0;
    for (const auto& c : rep.checks) passed += c.pass;
    std::cout << passed << "/" << rep.checks.size() << " acceptance criteria passed" << std::endl;
    if (argc > 2) {
        std::filesystem::create_directories(argv[2]);
        std::ofstream(std::filesystem::path(argv[2]) / "acceptance_report.json") << app::dump(app::to_json(rep));
    }
    return rep.all_pass(false) ? 0 : 1;
}
