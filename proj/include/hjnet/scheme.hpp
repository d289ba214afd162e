#ifndef HJNET_SCHEME_HPP
#define HJNET_SCHEME_HPP

#include <optional>
#include <vector>

#include "hjnet/grid.hpp"
#include "hjnet/scheme_params.hpp"

namespace hjnet {

enum class UpdateBranch { stay, cross };

// Optimal discrete controls behind one sample update. Velocities are signed
// in the arc's own parameterization (ds/dt). For a crossing update, alpha_i
// is the outward speed d/tau relative to the crossed node, matching the
// branch test alpha_i >= |x|/dt; t_j = dt - s0 - tau is the time spent on
// the arrival arc.
struct UpdateWitness {
    UpdateBranch branch = UpdateBranch::stay;
    double value = 0.0;
    double alpha_i = 0.0; // home-arc velocity (arc-local for stay, outward speed for cross)
    double foot = 0.0;    // arc-local foot coordinate (stay) or arrival foot distance (cross)
    int node = -1;        // crossed node index
    int arc_j = -1;       // arrival arc index (-1: none, all time at the node)
    double alpha_j = 0.0; // arrival velocity, arc-local sign
    double s0 = 0.0;      // time spent at the node
    double tau = 0.0;     // time spent on the home arc after crossing
};

struct SolveResult {
    std::vector<GridFunction> snapshots;
    GridFunction final;
    double max_abs_control = 0.0;
    bool control_clamp_hit = false;
    int steps = 0;
};

// Certified control bound: largest |argmax_a (a p - L(x,a))| over all arcs
// for gradients |p| <= grad_bound. The flux limiter never enlarges it (the
// junction control is zero). Throws on an empty network.
double control_bound(const Network& net, double grad_bound, double A = -kInf);

// The discrete operator S and its time stepping.
class SemiLagrangian {
public:
    // References are stored; the network and grid must outlive the scheme.
    SemiLagrangian(const Network& net, const Grid& grid, SchemeParams params);
    SemiLagrangian(const Network&, Grid&&, SchemeParams) = delete;
    SemiLagrangian(Network&&, const Grid&, SchemeParams) = delete;
    SemiLagrangian(Network&&, Grid&&, SchemeParams) = delete;

    const SchemeParams& params() const { return params_; }

    // One-sample updates of the previous layer v (interior / junction form).
    double update_interior(const GridFunction& v, int arc, int k, UpdateWitness* w = nullptr) const;
    double update_junction(const GridFunction& v, int node_idx, UpdateWitness* w = nullptr) const;

    // Dirichlet pinning and Neumann ghost extension at time t.
    void apply_boundary(GridFunction& v, double t) const;
    // Ghosts only (used on the initial layer, which stays exactly u0).
    void set_ghosts(GridFunction& v, double t) const;

    // Full layer update v(t) -> v(t + dt), boundary applied.
    GridFunction step(const GridFunction& v, double t,
                      std::vector<UpdateWitness>* witnesses = nullptr) const;

    SolveResult solve(const GridFunction& u0, const std::vector<double>& snapshot_times = {}) const;

private:
    struct Candidate;
    void branch_one(const GridFunction& v, int arc, int k, Candidate& best) const;
    void branch_cross(const GridFunction& v, int arc, int k, int node_idx, Candidate& best) const;
    void node_families(const GridFunction& v, int node_idx, int home_arc, double s_dep, double d,
                       Candidate& best) const;

    const Network* net_;
    const Grid* grid_;
    SchemeParams params_;
};

} // namespace hjnet

#endif
