#ifndef HJNET_TRAFFIC_HPP
#define HJNET_TRAFFIC_HPP

#include <functional>
#include <vector>

#include "hjnet/grid.hpp"
#include "hjnet/scheme.hpp"

namespace hjnet {

// LWR fundamental diagram f(rho) = rho * (1 - rho/lambda) with per-arc
// capacity lambda and flux scaling gamma. The derived Hamiltonian is even in
// p, so arc orientation does not enter the dynamics.
struct FluxModel {
    double lambda = 1.0;
    double gamma = 1.0;
};

// Vehicle density reconstructed from a value layer.
struct DensityField {
    double time = 0.0;
    std::vector<std::vector<double>> arc_rho; // per arc, cells+1 samples
    std::vector<double> node_rho;             // per node
    double min_rho = 0.0;
    double max_rho = 0.0;
    int cap_violations = 0; // samples outside [0, rho_cap], logged not clamped
};

// Cost whose Legendre transform is the sign-split flux Hamiltonian
// -f(gamma p)/gamma; for the LWR diagram this is flux_capacity(lambda/gamma).
LagrangianSpec hamiltonian_from_flux(const FluxModel& model);

// rho = -u_x by centered differences on arc interiors (one-sided at ends);
// at each node rho = -sum_i min(d_i u, 0) over one-sided derivatives into
// the incident arcs. rho_cap < 0 disables range accounting.
DensityField density_from_value(const GridFunction& u, double rho_cap = -1.0);

// Discrete stationary solution of |v_x| = rhs(pos) with v = 0 on Dirichlet
// boundary nodes, by value iteration at unit speed (one cell per sweep).
GridFunction eikonal_initializer(const Network& net, const Grid& grid,
                                 const std::function<double(Vec2)>& rhs, double tol = 1e-8,
                                 int max_sweeps = 200000);

struct EvacuationResult {
    std::vector<DensityField> densities; // one per snapshot
    SolveResult solve;
};

// Full evacuation run: eikonal initial layer, evolutive solve, densities at
// the snapshot times.
EvacuationResult run_evacuation(const Network& net, const Grid& grid, const SchemeParams& params,
                                const GridFunction& u0, const std::vector<double>& snapshot_times,
                                double rho_cap = -1.0);

} // namespace hjnet

#endif
