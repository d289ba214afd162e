#include "hjnet/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjnet {

LagrangianSpec hamiltonian_from_flux(const FluxModel& model) {
    if (!(model.lambda > 0.0)) throw std::invalid_argument("flux model: concavity needs lambda > 0");
    if (!(model.gamma > 0.0)) throw std::invalid_argument("flux model: gamma must be positive");
    return FluxCapacityCost{model.lambda / model.gamma};
}

DensityField density_from_value(const GridFunction& u, double rho_cap) {
    const Grid& g = u.grid();
    const Network& net = g.network();
    double dx = g.dx();
    DensityField out;
    out.time = u.time();
    out.arc_rho.resize(net.arcs().size());
    out.min_rho = kInf;
    out.max_rho = -kInf;
    auto account = [&](double rho) {
        out.min_rho = std::min(out.min_rho, rho);
        out.max_rho = std::max(out.max_rho, rho);
        if (rho_cap >= 0.0 && (rho < -1e-12 || rho > rho_cap + 1e-12)) ++out.cap_violations;
        return rho;
    };
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        int n = g.cells(static_cast<int>(a));
        auto& row = out.arc_rho[a];
        row.resize(static_cast<std::size_t>(n) + 1);
        auto val = [&](int k) { return u.at(static_cast<int>(a), k); };
        row[0] = account(-(val(1) - val(0)) / dx);
        for (int k = 1; k < n; ++k)
            row[static_cast<std::size_t>(k)] = account(-(val(k + 1) - val(k - 1)) / (2.0 * dx));
        row[static_cast<std::size_t>(n)] = account(-(val(n) - val(n - 1)) / dx);
    }
    out.node_rho.resize(net.nodes().size());
    for (std::size_t nd = 0; nd < net.nodes().size(); ++nd) {
        double rho = 0.0;
        double u_node = u[g.node_sample(static_cast<int>(nd))];
        for (const auto& inc : net.incident(static_cast<int>(nd))) {
            int k1 = inc.at_from ? 1 : g.cells(inc.arc) - 1;
            double du = (u.at(inc.arc, k1) - u_node) / dx; // one-sided, into the arc
            rho -= std::min(du, 0.0);
        }
        out.node_rho[nd] = account(rho);
    }
    return out;
}

GridFunction eikonal_initializer(const Network& net, const Grid& grid,
                                 const std::function<double(Vec2)>& rhs, double tol,
                                 int max_sweeps) {
    double dx = grid.dx();
    // sampled right-hand side, validated nonnegative
    std::vector<double> r(static_cast<std::size_t>(grid.num_samples()));
    double big = 1.0;
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= grid.cells(static_cast<int>(a)); ++k) {
            int id = grid.sample_id(static_cast<int>(a), k);
            double val = rhs(net.position(grid.sample_point(static_cast<int>(a), k)));
            if (val < 0.0)
                throw std::invalid_argument("eikonal_initializer: rhs is negative on the network");
            r[static_cast<std::size_t>(id)] = val;
        }
    for (const Arc& a : net.arcs()) big += a.length;
    double rmax = *std::max_element(r.begin(), r.end());
    big *= std::max(rmax, 1.0);

    std::vector<char> exit(net.nodes().size(), 0);
    bool any_exit = false;
    for (std::size_t nd = 0; nd < net.nodes().size(); ++nd) {
        const Node& node = net.nodes()[nd];
        if (node.kind == NodeKind::boundary && node.bc->kind == BcKind::dirichlet) {
            exit[nd] = 1;
            any_exit = true;
        }
    }
    if (!any_exit) throw std::invalid_argument("eikonal_initializer: no Dirichlet exit nodes");

    GridFunction v(grid, 0.0);
    for (int i = 0; i < grid.num_samples(); ++i) v[i] = big;
    for (std::size_t nd = 0; nd < net.nodes().size(); ++nd)
        if (exit[nd]) v[grid.node_sample(static_cast<int>(nd))] = 0.0;

    // Unit-speed update with time step dx: feet one cell away, so each sweep
    // relaxes against the sample's neighbors, through nodes included.
    GridFunction next = v;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double change = 0.0;
        for (std::size_t a = 0; a < net.arcs().size(); ++a) {
            int n = grid.cells(static_cast<int>(a));
            for (int k = 1; k < n; ++k) {
                int id = grid.sample_id(static_cast<int>(a), k);
                double best = std::min({v.at(static_cast<int>(a), k - 1),
                                        v.at(static_cast<int>(a), k),
                                        v.at(static_cast<int>(a), k + 1)});
                next[id] = std::min(v[id], best + dx * r[static_cast<std::size_t>(id)]);
            }
        }
        for (std::size_t nd = 0; nd < net.nodes().size(); ++nd) {
            int id = grid.node_sample(static_cast<int>(nd));
            if (exit[nd]) {
                next[id] = 0.0;
                continue;
            }
            double best = v[id];
            for (const auto& inc : net.incident(static_cast<int>(nd))) {
                int k1 = inc.at_from ? 1 : grid.cells(inc.arc) - 1;
                best = std::min(best, v.at(inc.arc, k1));
            }
            next[id] = std::min(v[id], best + dx * r[static_cast<std::size_t>(id)]);
        }
        for (int i = 0; i < grid.num_samples(); ++i) change = std::max(change, v[i] - next[i]);
        std::swap(v, next);
        if (change < tol) return v;
    }
    throw std::runtime_error("eikonal_initializer: no fixed point within the sweep cap");
}

EvacuationResult run_evacuation(const Network& net, const Grid& grid, const SchemeParams& params,
                                const GridFunction& u0, const std::vector<double>& snapshot_times,
                                double rho_cap) {
    bool any_exit = false;
    for (const Node& nd : net.nodes())
        if (nd.kind == NodeKind::boundary && nd.bc->kind == BcKind::dirichlet) any_exit = true;
    if (!any_exit) throw std::invalid_argument("run_evacuation: scenario has no exits");

    SemiLagrangian scheme(net, grid, params);
    EvacuationResult out;
    out.solve = scheme.solve(u0, snapshot_times);
    out.densities.reserve(out.solve.snapshots.size());
    for (const GridFunction& layer : out.solve.snapshots)
        out.densities.push_back(density_from_value(layer, rho_cap));
    return out;
}

} // namespace hjnet
