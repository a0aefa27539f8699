#include "cgreat/app/export.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace cgreat::app {

namespace {

std::string path_in(const std::string& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    return (std::filesystem::path(dir) / name).string();
}

std::string format(Real x) {
    if (!std::isfinite(static_cast<double>(x))) return std::isnan(static_cast<double>(x)) ? "nan" : (x > 0 ? "inf" : "-inf");
    char buf[64];
    // the C locale is never changed, so the decimal point is '.'
    std::snprintf(buf, sizeof buf, "%.15Lg", x);
    return buf;
}

std::vector<Real> graph_samples(const Lift& f, std::size_t grid) { return sample_points({&f}, grid, 16); }

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<Cell>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorKind::Serialization, "cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& row : rows) {
        if (row.size() != header.size()) throw Error(ErrorKind::Serialization, path + ": row width mismatch");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            if (row[i]) out << format(*row[i]);
        }
        out << '\n';
    }
}

std::string export_map_graph(Pipeline& p, const std::string& dir) {
    const Lift& f = p.base_map();
    const Lift& F = p.final_map();
    auto xs = sample_points({&f, &F}, 4096, 16);
    std::vector<std::vector<Cell>> rows;
    for (Real x : xs) {
        Jet a = f.jet(x), b = F.jet(x);
        rows.push_back({x, a.value, a.deriv, b.value, b.deriv});
    }
    std::string path = path_in(dir, "map_graph.csv");
    write_csv(path, {"x", "f", "Df", "F", "DF"}, rows);
    return path;
}

std::string export_potential(Pipeline& p, const std::string& dir) {
    const auto& st = p.construction().stage;
    std::vector<std::vector<Cell>> rows;
    for (Real y : graph_samples(st.h, 4096)) {
        Real phi = st.potential->value(y);
        rows.push_back({y, phi, std::exp(phi) / st.xi.xi, st.h(y)});
    }
    std::string path = path_in(dir, "potential.csv");
    write_csv(path, {"y", "Phi", "Psi", "h"}, rows);
    return path;
}

std::string export_schedule(Pipeline& p, const std::string& dir) {
    const auto& r = p.step();
    const auto& s = r.schedule;
    std::vector<perturb::Residual> res = perturb::residuals(s, r.e);
    std::vector<std::vector<Cell>> rows;
    for (long j = s.c.lo; j <= s.c.hi(); ++j) {
        Cell e, rr;
        if (r.e.e.has(j)) e = r.e.at(j);
        for (const auto& q : res)
            if (q.j == j) rr = q.value;
        rows.push_back({Real(j), s.points.at(j), s.b.at(j), s.c.at(j), s.cocycle.at(j), e, rr});
    }
    std::string path = path_in(dir, "schedule.csv");
    write_csv(path, {"j", "point", "b", "c", "cocycle", "e", "residual"}, rows);
    return path;
}

std::string export_delta_scan(Pipeline& p, const std::string& dir) {
    const auto& sc = p.scheme();
    std::vector<std::vector<Cell>> rows;
    for (std::size_t k = 0; k < sc.probes.size(); ++k)
        for (const auto& d : sc.probes[k].scan) rows.push_back({Real(k + 1), d.x, d.u, d.v, d.value});
    std::string path = path_in(dir, "delta_scan.csv");
    write_csv(path, {"stage", "x", "u", "v", "delta"}, rows);
    return path;
}

std::string export_invariant_graph(const Lift& f, const std::string& dir) {
    twist::InvariantGraph graph(f);
    std::vector<std::vector<Cell>> rows;
    for (Real t : graph_samples(f, 4096)) rows.push_back({t, graph.psi(t)});
    std::string path = path_in(dir, "invariant_graph.csv");
    write_csv(path, {"theta", "psi"}, rows);
    return path;
}

std::string export_phase_portrait(const Lift& f, const std::string& dir, std::size_t orbits, std::size_t steps) {
    twist::TwistMap g(f);
    twist::InvariantGraph graph(f);
    std::vector<std::vector<Cell>> rows;
    for (std::size_t k = 0; k < orbits; ++k) {
        // first orbit on the graph, the rest on horizontal lines above and below it
        Real t0 = static_cast<Real>(k) / static_cast<Real>(orbits);
        Real r0 = k == 0 ? graph.psi(0) : -0.5L + static_cast<Real>(k) / static_cast<Real>(orbits);
        twist::AnnulusPoint q{t0, r0};
        for (std::size_t n = 0; n <= steps; ++n) {
            rows.push_back({Real(k), Real(n), frac(q.theta), q.r});
            q = g.apply_lift(q);
        }
    }
    std::string path = path_in(dir, "phase_portrait.csv");
    write_csv(path, {"orbit", "n", "theta", "r"}, rows);
    return path;
}

const std::vector<std::string>& export_targets() {
    static const std::vector<std::string> t{"map", "potential", "schedule", "delta", "graph", "portrait"};
    return t;
}

std::vector<std::string> run_export(Pipeline& p, const std::string& what, const std::string& dir) {
    std::vector<std::string> out;
    auto one = [&](const std::string& t) {
        if (t == "map") out.push_back(export_map_graph(p, dir));
        else if (t == "potential") out.push_back(export_potential(p, dir));
        else if (t == "schedule") out.push_back(export_schedule(p, dir));
        else if (t == "delta") out.push_back(export_delta_scan(p, dir));
        else if (t == "graph") out.push_back(export_invariant_graph(p.final_map(), dir));
        else if (t == "portrait") out.push_back(export_phase_portrait(p.final_map(), dir));
        else throw Error(ErrorKind::Config, "unknown export target " + t);
    };
    if (what == "all")
        for (const auto& t : export_targets()) one(t);
    else
        one(what);
    return out;
}

}  // namespace cgreat::app
