#include "hjnet/scenario.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "hjnet/traffic.hpp"

namespace hjnet {

using nlohmann::json;

namespace {

Vec2 parse_vec2(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

LagrangianSpec parse_lagrangian(const json& j) {
    std::string type = j.at("type").get<std::string>();
    if (type == "quadratic") return QuadraticCost{j.at("c").get<double>()};
    if (type == "quadratic_x") return QuadraticXCost{j.at("coeffs").get<std::vector<double>>()};
    if (type == "flux") return FluxCapacityCost{j.at("lambda").get<double>()};
    if (type == "table")
        return TabulatedCost{j.at("alphas").get<std::vector<double>>(),
                             j.at("values").get<std::vector<double>>()};
    throw std::invalid_argument("unknown lagrangian type '" + type + "'");
}

BoundaryCondition parse_bc(const json& j) {
    BoundaryCondition bc;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "dirichlet")
        bc.kind = BcKind::dirichlet;
    else if (kind == "neumann")
        bc.kind = BcKind::neumann;
    else
        throw std::invalid_argument("unknown boundary kind '" + kind + "'");
    if (j.contains("value")) {
        bc.constant = j.at("value").get<double>();
    } else {
        bc.times = j.at("times").get<std::vector<double>>();
        bc.values = j.at("values").get<std::vector<double>>();
    }
    return bc;
}

FieldSpec parse_field(const json& j) {
    FieldSpec f;
    std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        f.kind = FieldSpec::Kind::constant;
        f.a = j.at("value").get<double>();
    } else if (type == "radial") {
        f.kind = FieldSpec::Kind::radial;
        f.a = j.at("a").get<double>();
        f.b = j.at("b").get<double>();
        f.center = parse_vec2(j.at("center"));
    } else {
        throw std::invalid_argument("unknown field type '" + type + "'");
    }
    return f;
}

InitialSpec parse_initial(const json& j) {
    InitialSpec init;
    std::string type = j.at("type").get<std::string>();
    if (type == "constant") {
        init.kind = InitialSpec::Kind::constant;
        init.constant = j.at("value").get<double>();
    } else if (type == "affine_position") {
        init.kind = InitialSpec::Kind::affine_position;
        init.a = j.value("a", 0.0);
        init.bx = j.value("bx", 0.0);
        init.by = j.value("by", 0.0);
    } else if (type == "sin_pi_distance") {
        init.kind = InitialSpec::Kind::sin_pi_distance;
        init.distance_node = j.at("node").get<int>();
    } else if (type == "eikonal") {
        init.kind = InitialSpec::Kind::eikonal;
        init.rhs = parse_field(j.at("rhs"));
    } else if (type == "tabulated") {
        init.kind = InitialSpec::Kind::tabulated;
        init.tabulated = j.at("values").get<std::vector<std::vector<double>>>();
    } else {
        throw std::invalid_argument("unknown initial type '" + type + "'");
    }
    return init;
}

} // namespace

Scenario parse_scenario(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string("malformed scenario document: ") + e.what());
    }
    Scenario sc;
    sc.name = j.value("name", std::string("scenario"));
    std::vector<Node> nodes;
    for (const auto& jn : j.at("nodes")) {
        Node n;
        n.id = jn.at("id").get<int>();
        std::string kind = jn.at("kind").get<std::string>();
        if (jn.contains("position")) n.position = parse_vec2(jn.at("position"));
        if (kind == "junction") {
            n.kind = NodeKind::junction;
            if (jn.contains("A")) n.flux_limiter = jn.at("A").get<double>();
        } else if (kind == "boundary") {
            n.kind = NodeKind::boundary;
            n.bc = parse_bc(jn.at("bc"));
        } else {
            throw std::invalid_argument("unknown node kind '" + kind + "'");
        }
        nodes.push_back(std::move(n));
    }
    std::vector<Arc> arcs;
    for (const auto& ja : j.at("arcs")) {
        Arc a;
        a.id = ja.at("id").get<int>();
        a.from = ja.at("from").get<int>();
        a.to = ja.at("to").get<int>();
        // half-lines must be truncated to a computational length before any
        // grid is built; the far endpoint then acts as an outflow boundary
        if (ja.at("length").is_string() && ja.at("length").get<std::string>() == "unbounded") {
            if (!ja.contains("truncate"))
                throw std::invalid_argument("arc " + std::to_string(a.id) +
                                            ": unbounded arcs need a 'truncate' length");
            a.length = ja.at("truncate").get<double>();
        } else {
            a.length = ja.at("length").get<double>();
        }
        a.lagrangian = parse_lagrangian(ja.at("lagrangian"));
        arcs.push_back(std::move(a));
    }
    sc.network = std::make_shared<Network>(std::move(nodes), std::move(arcs));
    const auto& jp = j.at("params");
    sc.params.dx = jp.at("dx").get<double>();
    sc.params.dt = jp.at("dt").get<double>();
    sc.params.T = jp.at("T").get<double>();
    sc.params.mu = jp.at("control_bound").get<double>();
    sc.params.n_alpha = jp.value("n_alpha", 0);
    sc.params.tol = jp.value("tol", 1e-13);
    sc.initial = parse_initial(j.at("initial"));
    return sc;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open scenario file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

GridFunction make_initial_layer(const Scenario& sc, const Grid& grid) {
    const Network& net = *sc.network;
    switch (sc.initial.kind) {
    case InitialSpec::Kind::constant:
        return GridFunction::sample(grid, [&](ArcPoint) { return sc.initial.constant; });
    case InitialSpec::Kind::affine_position:
        return GridFunction::sample(grid, [&](ArcPoint p) {
            Vec2 q = net.position(p);
            return sc.initial.a + sc.initial.bx * q.x + sc.initial.by * q.y;
        });
    case InitialSpec::Kind::sin_pi_distance: {
        int nidx = net.node_index(sc.initial.distance_node);
        const auto& inc = net.incident(nidx);
        if (inc.empty()) throw std::invalid_argument("initial: reference node has no arcs");
        ArcPoint origin{inc.front().arc,
                        inc.front().at_from ? 0.0 : net.arc(inc.front().arc).length};
        return GridFunction::sample(grid, [&](ArcPoint p) {
            return std::sin(3.14159265358979323846 * geodesic_distance(net, p, origin));
        });
    }
    case InitialSpec::Kind::eikonal:
        return eikonal_initializer(net, grid, [&](Vec2 pos) { return sc.initial.rhs(pos); });
    case InitialSpec::Kind::tabulated: {
        const auto& tab = sc.initial.tabulated;
        if (tab.size() != net.arcs().size())
            throw std::invalid_argument("initial: tabulated values need one row per arc");
        GridFunction out(grid);
        for (std::size_t a = 0; a < tab.size(); ++a) {
            int n = grid.cells(static_cast<int>(a));
            if (static_cast<int>(tab[a].size()) != n + 1)
                throw std::invalid_argument("initial: tabulated row size mismatch on arc " +
                                            std::to_string(net.arc(static_cast<int>(a)).id));
            for (int k = 0; k <= n; ++k) out.at(static_cast<int>(a), k) = tab[a][static_cast<std::size_t>(k)];
        }
        return out;
    }
    }
    throw std::logic_error("unreachable");
}

} // namespace hjnet
