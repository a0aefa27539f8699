#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cgreat/app/acceptance.hpp"
#include "cgreat/app/export.hpp"
#include "cgreat/core/json_util.hpp"

using namespace cgreat;
using namespace cgreat::app;
using nlohmann::json;

namespace {

ErrorKind kind_of(const json& j) {
    try {
        parse_config(j);
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("config accepted: " << j.dump());
    return ErrorKind::Config;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace

TEST_CASE("config defaults and overrides") {
    PipelineConfig d = parse_config(json::object());
    CHECK(d.minimal.depth == 3);
    CHECK(d.base_stage == 2);
    CHECK(d.word == "ll");
    CHECK(d.scheme.stages == 2);
    CHECK(d.scheme.step.epsilon == doctest::Approx(1e-2));
    CHECK(d.scheme.step.c1_grid == 10000);

    PipelineConfig c = parse_config({{"minimal", {{"depth", 0}}}, {"seed", 9}, {"perturb", {{"C", 4}}}});
    CHECK(c.base_stage == 0);
    CHECK(c.word.empty());
    CHECK(c.seed == 9);
    CHECK(c.scheme.step.transfer.seed == 9);
    CHECK(c.scheme.step.C == 4);

    CHECK(parse_config(to_json(d)).seed == d.seed);
    CHECK(to_json(parse_config(to_json(d))) == to_json(d));
}

TEST_CASE("config validation") {
    CHECK(kind_of({{"minimal", {{"m_seq", {10, 9, 18, 24}}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"nope", 1}}) == ErrorKind::Config);
    CHECK(kind_of({{"minimal", {{"nope", 1}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"minimal", {{"depth", "3"}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"perturb", {{"stages", -1}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"perturb", {{"epsilon", 0}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"perturb", {{"delta", 0.5}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"perturb", {{"C", 1}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"minimal", {{"quad_tol", -1}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"word", "lx"}}) == ErrorKind::Config);
    CHECK(kind_of({{"word", "lll"}}) == ErrorKind::Config);
    CHECK(kind_of({{"alpha_coefficients", json::array()}}) == ErrorKind::Config);
    CHECK(kind_of({{"tolerances", {{"grid", 3}}}}) == ErrorKind::Config);
    CHECK(kind_of({{"seed", -1}}) == ErrorKind::Config);
    CHECK(kind_of(json::array()) == ErrorKind::Config);
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), Error);
}

TEST_CASE("config hash") {
    PipelineConfig a = default_config(), b = default_config();
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.out_dir = "elsewhere";
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 2;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("report rounding and envelope") {
    CHECK(rounded(Real(1) / 3) == 0.333333333333);
    CHECK(json(rounded(Real(2) / 3)).dump() == "0.666666666667");
    CHECK(rounded(123456789.123456789L) == 123456789.123);

    VerificationReport rep;
    rep.config_hash = "abc";
    Check c;
    c.id = "x";
    c.anchor = "statement";
    c.pass = true;
    c.proxy = true;
    c.marginal = true;
    c.runtime_s = 1.5;
    rep.checks.push_back(c);
    json j = to_json(rep);
    CHECK(j.contains("checks"));
    CHECK(j["config_hash"] == "abc");
    CHECK(j["versions"].contains("cgreat"));
    CHECK(j["checks"][0]["anchor"] == "statement");
    CHECK_FALSE(j["checks"][0].contains("runtime_s"));
    CHECK(timings(rep)["x"] == 1.5);
    CHECK(rep.all_pass(false));
    CHECK_FALSE(rep.all_pass(true));
    CHECK(summary_line(rep.checks[0], true).rfind("[MARGINAL]", 0) == 0);
    CHECK(near_upper(0.95, 1));
    CHECK_FALSE(near_upper(0.5, 1));
    CHECK(near_lower(10.5, 10));
    CHECK_FALSE(near_lower(20, 10));
}

TEST_CASE("csv format") {
    auto dir = std::filesystem::temp_directory_path() / "cgreat_csv_test";
    std::filesystem::create_directories(dir);
    auto path = (dir / "t.csv").string();
    write_csv(path, {"a", "b"}, {{Real(0.5), std::nullopt}, {Real(-1.25e-7L), Real(3)}});
    CHECK(slurp(path) == "a,b\n0.5,\n-1.25e-07,3\n");
    CHECK_THROWS_AS(write_csv(path, {"a"}, {{Real(1), Real(2)}}), Error);

    auto graph = export_invariant_graph(Lift::rotation(0.25L), dir.string());
    std::string text = slurp(graph);
    CHECK(text.rfind("theta,psi\n0,0.25\n", 0) == 0);
    CHECK(text.find('\r') == std::string::npos);
    auto portrait = export_phase_portrait(Lift::rotation(0.25L), dir.string(), 2, 3);
    CHECK(slurp(portrait).rfind("orbit,n,theta,r\n0,0,0,0.25\n0,1,0.25,0.25\n", 0) == 0);
    std::filesystem::remove_all(dir);
}

TEST_CASE("seeded points are reproducible") {
    auto a = seeded_points(5, 3), b = seeded_points(5, 3), c = seeded_points(5, 4);
    CHECK(a == b);
    CHECK(a != c);
    for (Real x : seeded_points(100, 1, -2, 2)) CHECK((x >= -2 && x < 2));
}

TEST_CASE("acceptance subset on a cheap configuration") {
    PipelineConfig cfg = parse_config({{"minimal", {{"depth", 1}, {"m_seq", {10, 14}}}}});
    Pipeline p(cfg);
    auto rep = run_acceptance(p, {1, 2, 7, 8});
    REQUIRE(rep.checks.size() == 4);
    for (const auto& c : rep.checks) {
        CHECK(c.pass);
        CHECK_FALSE(c.anchor.empty());
    }
    auto six = run_acceptance(p, {6});
    REQUIRE(six.checks.size() == 1);
    CHECK_FALSE(six.checks[0].pass);
    CHECK(six.checks[0].note.find("depth >= 3") != std::string::npos);
}
