#include "cgreat/app/config.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>

#include "cgreat/core/json_util.hpp"

namespace cgreat::app {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& what) { throw Error(ErrorKind::Config, what); }

/// Reads keys from one object and rejects anything it was not asked for.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) bad(path_ + " must be an object");
    }

    ~Section() noexcept(false) {
        if (std::uncaught_exceptions() > 0) return;
        for (const auto& [k, v] : j_.items())
            if (!seen_.count(k)) bad("unknown key " + name(k));
    }

    bool has(const std::string& k) {
        seen_.insert(k);
        return j_.contains(k);
    }

    void real(const std::string& k, Real& out) {
        if (!has(k)) return;
        const json& v = j_.at(k);
        if (!v.is_number()) bad(name(k) + " must be a number");
        out = static_cast<Real>(v.get<double>());
    }

    template <class Int>
    void integer(const std::string& k, Int& out) {
        if (!has(k)) return;
        const json& v = j_.at(k);
        if (!v.is_number_integer()) bad(name(k) + " must be an integer");
        if constexpr (std::is_unsigned_v<Int>) {
            if (v.is_number_unsigned()) {
                out = static_cast<Int>(v.get<std::uint64_t>());
                return;
            }
            if (v.get<long long>() < 0) bad(name(k) + " must be nonnegative");
            out = static_cast<Int>(v.get<long long>());
        } else {
            out = static_cast<Int>(v.get<long long>());
        }
    }

    void boolean(const std::string& k, bool& out) {
        if (!has(k)) return;
        if (!j_.at(k).is_boolean()) bad(name(k) + " must be a boolean");
        out = j_.at(k).get<bool>();
    }

    void string(const std::string& k, std::string& out) {
        if (!has(k)) return;
        if (!j_.at(k).is_string()) bad(name(k) + " must be a string");
        out = j_.at(k).get<std::string>();
    }

    template <class Int>
    void int_list(const std::string& k, std::vector<Int>& out) {
        if (!has(k)) return;
        const json& v = j_.at(k);
        if (!v.is_array()) bad(name(k) + " must be an array of integers");
        out.clear();
        for (const auto& e : v) {
            if (!e.is_number_integer()) bad(name(k) + " must be an array of integers");
            out.push_back(e.get<Int>());
        }
    }

    const json& child(const std::string& k) {
        seen_.insert(k);
        return j_.at(k);
    }

    std::string name(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

void positive(Real v, const std::string& what) {
    if (!(v > 0) || !std::isfinite(static_cast<double>(v))) bad(what + " must be positive");
}

}  // namespace

void validate_config(const PipelineConfig& c) {
    const auto& m = c.minimal;
    if (m.alpha.coefficients.empty()) bad("alpha_coefficients must not be empty");
    for (int a : m.alpha.coefficients)
        if (a < 1) bad("alpha_coefficients must be positive integers");
    if (m.depth < 0) bad("minimal.depth must be nonnegative");
    if (m.m_seq.size() < static_cast<std::size_t>(m.depth) + 1)
        bad("minimal.m_seq needs depth + 1 entries");
    for (std::size_t i = 0; i < m.m_seq.size(); ++i) {
        if (m.m_seq[i] < 1) bad("minimal.m_seq entries must be positive");
        if (i > 0 && m.m_seq[i] <= m.m_seq[i - 1]) bad("minimal.m_seq must be strictly increasing");
    }
    if (m.m_cap < m.m_seq.back()) bad("minimal.m_cap must be at least the last m_seq entry");
    if (m.m_cap > 60) bad("minimal.m_cap above 60 exceeds the working precision");
    positive(m.quad_tol, "minimal.quad_tol");
    positive(m.tree.margin, "minimal.tree_margin");
    if (m.tree.k_cap < 1) bad("minimal.k_cap must be positive");

    if (c.base_stage < 0 || c.base_stage > m.depth) bad("base_stage must lie in [0, depth]");
    if (static_cast<long>(c.word.size()) != c.base_stage) bad("word length must equal base_stage");
    for (char ch : c.word)
        if (ch != 'l' && ch != 'r') bad("word must use the letters l and r");

    const auto& s = c.scheme;
    const auto& st = s.step;
    if (s.stages < 0) bad("perturb.stages must be nonnegative");
    if (!(st.C > 1)) bad("perturb.C must exceed 1");
    positive(st.epsilon, "perturb.epsilon");
    if (!(s.epsilon_ratio > 0 && s.epsilon_ratio <= 1)) bad("perturb.epsilon_ratio must lie in (0, 1]");
    positive(st.smallness, "perturb.smallness");
    positive(st.largeness, "perturb.largeness");
    positive(st.probe_margin, "perturb.probe_margin");
    positive(st.macro_scale, "perturb.macro_scale");
    if (st.horizon < 2) bad("perturb.horizon must be at least 2");
    if (st.delta < 0 || st.delta > 0.25L) bad("perturb.delta must lie in [0, 1/4] (0 selects the default)");
    positive(st.growth_threshold, "perturb.growth_threshold");
    positive(st.linearizer.floor_width, "perturb.linearizer_floor");
    if (st.transfer.samples < 1) bad("perturb.transfer_samples must be positive");
    positive(st.transfer.neighborhood, "perturb.transfer_neighborhood");

    const auto& t = c.tol;
    if (t.grid < 10 || t.identity_samples < 2 || t.check_points < 1 || t.fd_points < 1)
        bad("tolerances: grid sizes too small");
    if (t.rotation_iterations < 1) bad("tolerances.rotation_iterations must be positive");
    if (c.out_dir.empty()) bad("out must not be empty");
}

PipelineConfig default_config() {
    PipelineConfig c;
    auto& st = c.scheme.step;
    st.smallness = 2;
    st.largeness = 5;
    st.require_cgood = false;
    st.require_closeness = false;
    c.scheme.stages = 2;
    return c;
}

PipelineConfig parse_config(const json& j) {
    PipelineConfig c = default_config();
    auto& m = c.minimal;
    auto& s = c.scheme;
    auto& st = s.step;
    auto& t = c.tol;
    {
        Section top(j, "");
        top.int_list("alpha_coefficients", m.alpha.coefficients);
        if (top.has("minimal")) {
            Section sec(top.child("minimal"), "minimal");
            sec.int_list("m_seq", m.m_seq);
            sec.integer("depth", m.depth);
            sec.integer("m_cap", m.m_cap);
            sec.integer("k_cap", m.tree.k_cap);
            sec.real("tree_margin", m.tree.margin);
            sec.real("quad_tol", m.quad_tol);
        }
        bool stage_given = top.has("base_stage"), word_given = top.has("word");
        top.integer("base_stage", c.base_stage);
        top.string("word", c.word);
        if (!stage_given) c.base_stage = std::min<long>(c.base_stage, m.depth);
        if (!word_given) c.word = std::string(static_cast<std::size_t>(std::max<long>(c.base_stage, 0)), 'l');
        if (top.has("perturb")) {
            Section sec(top.child("perturb"), "perturb");
            sec.real("C", st.C);
            sec.real("epsilon", st.epsilon);
            sec.real("epsilon_ratio", s.epsilon_ratio);
            sec.integer("stages", s.stages);
            sec.real("smallness", st.smallness);
            sec.real("largeness", st.largeness);
            sec.real("probe_margin", st.probe_margin);
            sec.real("macro_scale", st.macro_scale);
            sec.integer("horizon", st.horizon);
            sec.real("delta", st.delta);
            sec.real("growth_threshold", st.growth_threshold);
            sec.boolean("require_cgood", st.require_cgood);
            sec.boolean("require_closeness", st.require_closeness);
            sec.boolean("reuse_windows", s.reuse_windows);
            sec.real("linearizer_floor", st.linearizer.floor_width);
            sec.integer("transfer_samples", st.transfer.samples);
            sec.real("transfer_neighborhood", st.transfer.neighborhood);
        }
        if (top.has("tolerances")) {
            Section sec(top.child("tolerances"), "tolerances");
            sec.integer("grid", t.grid);
            sec.integer("identity_samples", t.identity_samples);
            sec.integer("check_points", t.check_points);
            sec.integer("fd_points", t.fd_points);
            sec.integer("rotation_iterations", t.rotation_iterations);
        }
        top.string("out", c.out_dir);
        top.integer("seed", c.seed);
    }
    validate_config(c);
    st.c1_grid = t.grid;
    st.identity_samples = t.identity_samples;
    st.transfer.seed = c.seed;
    return c;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) bad("cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        bad(path + ": " + e.what());
    }
    return parse_config(j);
}

json to_json(const PipelineConfig& c) {
    const auto& m = c.minimal;
    const auto& s = c.scheme;
    const auto& st = s.step;
    const auto& t = c.tol;
    return {{"alpha_coefficients", m.alpha.coefficients},
            {"minimal",
             {{"m_seq", m.m_seq},
              {"depth", m.depth},
              {"m_cap", m.m_cap},
              {"k_cap", m.tree.k_cap},
              {"tree_margin", rounded(m.tree.margin)},
              {"quad_tol", rounded(m.quad_tol)}}},
            {"base_stage", c.base_stage},
            {"word", c.word},
            {"perturb",
             {{"C", rounded(st.C)},
              {"epsilon", rounded(st.epsilon)},
              {"epsilon_ratio", rounded(s.epsilon_ratio)},
              {"stages", s.stages},
              {"smallness", rounded(st.smallness)},
              {"largeness", rounded(st.largeness)},
              {"probe_margin", rounded(st.probe_margin)},
              {"macro_scale", rounded(st.macro_scale)},
              {"horizon", st.horizon},
              {"delta", rounded(st.delta)},
              {"growth_threshold", rounded(st.growth_threshold)},
              {"require_cgood", st.require_cgood},
              {"require_closeness", st.require_closeness},
              {"reuse_windows", s.reuse_windows},
              {"linearizer_floor", rounded(st.linearizer.floor_width)},
              {"transfer_samples", st.transfer.samples},
              {"transfer_neighborhood", rounded(st.transfer.neighborhood)}}},
            {"tolerances",
             {{"grid", t.grid},
              {"identity_samples", t.identity_samples},
              {"check_points", t.check_points},
              {"fd_points", t.fd_points},
              {"rotation_iterations", t.rotation_iterations}}},
            {"out", c.out_dir},
            {"seed", c.seed}};
}

std::string config_hash(const PipelineConfig& cfg) {
    // out is where results go, not what they are
    json j = to_json(cfg);
    j.erase("out");
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : j.dump()) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace cgreat::app
