#include <memory>

#include "cgreat/core/json_util.hpp"
#include "cgreat/core/nodes.hpp"

namespace cgreat {

using nlohmann::json;

json RotationNode::to_json() const { return {{"kind", "Rotation"}, {"alpha", exact(alpha_)}}; }

json AffinePatchworkNode::to_json() const {
    json xs = json::array(), ys = json::array();
    for (Real x : xs_) xs.push_back(exact(x));
    for (Real y : ys_) ys.push_back(exact(y));
    return {{"kind", "AffinePatchwork"}, {"xs", xs}, {"ys", ys}};
}

json BumpDerivNode::to_json() const {
    json ps = json::array();
    for (const auto& p : patches_)
        ps.push_back({{"center", exact(p.center)}, {"half_width", exact(p.half_width)},
                      {"amplitude", exact(p.amplitude)}, {"index", p.index}});
    return {{"kind", "BumpDerivDiffeo"}, {"delta", exact(bump_.delta())}, {"patches", ps}};
}

json DensityNode::to_json() const {
    json ts = json::array();
    for (const auto& t : potential_->terms())
        ts.push_back({{"center", exact(t.center)}, {"length", exact(t.length)},
                      {"amplitude", exact(t.amplitude)}, {"level", t.level}, {"shift", t.shift},
                      {"word", t.word}});
    return {{"kind", "DensityDiffeo"}, {"xi", exact(xi_)}, {"terms", ts},
            {"quad_tol", exact(potential_->quadrature_tolerance())}};
}

json ComposeNode::to_json() const {
    return {{"kind", "Compose"}, {"left", left_.to_json()}, {"right", right_.to_json()}};
}

json InverseNode::to_json() const {
    return {{"kind", "Inverse"}, {"inner", inner_.to_json()}, {"tol", exact(opts_.tol)}};
}

json ConjugateNode::to_json() const {
    return {{"kind", "Conjugate"}, {"outer", outer_.to_json()}, {"inner", inner_.to_json()}};
}

json OrbitLinearizerNode::to_json() const {
    json ps = json::array();
    for (const auto& p : patches_)
        ps.push_back({{"center", exact(p.center)}, {"half_width", exact(p.half_width)},
                      {"anchor", exact(p.anchor)}, {"power", p.power}, {"slope", exact(p.slope)},
                      {"index", p.index}});
    return {{"kind", "OrbitLinearizer"}, {"base", base_.to_json()}, {"patches", ps}};
}

Lift Lift::from_json(const json& j) {
    if (!j.is_object() || !j.contains("kind"))
        throw Error(ErrorKind::Serialization, "lift node must be an object with a kind");
    const std::string kind = j.at("kind").get<std::string>();
    try {
        if (kind == "Rotation") return rotation(read_real(j.at("alpha")));
        if (kind == "AffinePatchwork") {
            std::vector<Real> xs, ys;
            for (const auto& v : j.at("xs")) xs.push_back(read_real(v));
            for (const auto& v : j.at("ys")) ys.push_back(read_real(v));
            return Lift(std::make_shared<AffinePatchworkNode>(xs, ys));
        }
        if (kind == "BumpDerivDiffeo") {
            std::vector<BumpDerivNode::Patch> ps;
            for (const auto& p : j.at("patches"))
                ps.push_back({read_real(p.at("center")), read_real(p.at("half_width")),
                              read_real(p.at("amplitude")), p.at("index").get<int>()});
            return Lift(std::make_shared<BumpDerivNode>(ps, read_real(j.at("delta"))));
        }
        if (kind == "DensityDiffeo") {
            std::vector<BumpTerm> ts;
            for (const auto& t : j.at("terms"))
                ts.push_back({read_real(t.at("center")), read_real(t.at("length")),
                              read_real(t.at("amplitude")), t.at("level").get<int>(),
                              t.at("shift").get<int>(), t.at("word").get<std::string>()});
            auto pot = std::make_shared<BumpPotential>(ts, read_real(j.at("quad_tol")));
            return Lift(std::make_shared<DensityNode>(pot, read_real(j.at("xi"))));
        }
        if (kind == "Compose") return compose(from_json(j.at("left")), from_json(j.at("right")));
        if (kind == "Inverse")
            return Lift(std::make_shared<InverseNode>(from_json(j.at("inner")),
                                                      InvertOptions{read_real(j.at("tol")), 200}));
        if (kind == "Conjugate") return conjugate(from_json(j.at("outer")), from_json(j.at("inner")));
        if (kind == "OrbitLinearizer") {
            std::vector<OrbitLinearizerNode::Patch> ps;
            for (const auto& p : j.at("patches"))
                ps.push_back({read_real(p.at("center")), read_real(p.at("half_width")),
                              read_real(p.at("anchor")), p.at("power").get<long>(),
                              read_real(p.at("slope")), p.at("index").get<int>()});
            return Lift(std::make_shared<OrbitLinearizerNode>(from_json(j.at("base")), ps));
        }
    } catch (const json::exception& e) {
        throw Error(ErrorKind::Serialization, std::string("malformed ") + kind + " node: " + e.what());
    }
    throw Error(ErrorKind::Serialization, "unknown node kind " + kind);
}

}  // namespace cgreat
