#ifndef HJNET_SCENARIO_HPP
#define HJNET_SCENARIO_HPP

#include <functional>
#include <memory>
#include <string>

#include "hjnet/grid.hpp"
#include "hjnet/network.hpp"
#include "hjnet/scheme_params.hpp"

namespace hjnet {

// Position-dependent scalar field used for eikonal right-hand sides:
// constant, or a - b*|pos - center|^2.
struct FieldSpec {
    enum class Kind { constant, radial } kind = Kind::constant;
    double a = 0.0;
    double b = 0.0;
    Vec2 center{};

    double operator()(Vec2 pos) const {
        if (kind == Kind::constant) return a;
        return a - b * norm2(pos - center);
    }
};

// Initial value layer. `distance_node` is a node id for the sin_pi_distance
// variant (sin(pi * geodesic distance to that node)).
struct InitialSpec {
    enum class Kind { constant, affine_position, sin_pi_distance, eikonal, tabulated } kind =
        Kind::constant;
    double constant = 0.0;
    double a = 0.0, bx = 0.0, by = 0.0; // affine: a + bx*x + by*y
    int distance_node = 0;
    FieldSpec rhs;                              // eikonal
    std::vector<std::vector<double>> tabulated; // per arc index, cells+1 values
};

// One self-contained run: geometry, costs, parameters, initial data.
struct Scenario {
    std::string name;
    std::shared_ptr<Network> network;
    SchemeParams params;
    InitialSpec initial;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

// Evaluate the initial condition on a grid. Eikonal variants run the
// stationary solver declared in traffic.hpp.
GridFunction make_initial_layer(const Scenario& sc, const Grid& grid);

} // namespace hjnet

#endif
