#ifndef HJNET_NETWORK_HPP
#define HJNET_NETWORK_HPP

#include <optional>
#include <string>
#include <vector>

#include "hjnet/geometry.hpp"
#include "hjnet/lagrangian.hpp"

namespace hjnet {

enum class NodeKind { junction, boundary };
enum class BcKind { dirichlet, neumann };

// Boundary data, constant or tabulated in time (linear interpolation,
// clamped outside the sampled range).
struct BoundaryCondition {
    BcKind kind = BcKind::dirichlet;
    double constant = 0.0;
    std::vector<double> times;  // empty => constant
    std::vector<double> values;

    double value(double t) const;
};

struct Node {
    int id = 0;
    NodeKind kind = NodeKind::junction;
    Vec2 position{};
    double flux_limiter = -kInf;         // junction only; -inf disables the limiter
    std::optional<BoundaryCondition> bc; // boundary only
};

struct Arc {
    int id = 0;
    int from = 0; // node ids; arc-local coordinate s in [0, length] runs from -> to
    int to = 0;
    double length = 0.0;
    LagrangianSpec lagrangian = QuadraticCost{0.0};
};

// A point on the network: arc index (not id) plus arc-local coordinate.
struct ArcPoint {
    int arc = 0;
    double s = 0.0;
};

struct IncidentArc {
    int arc = 0;     // arc index
    bool at_from = true; // true when the node sits at the arc's s = 0 end
};

class Network {
public:
    Network(std::vector<Node> nodes, std::vector<Arc> arcs);

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<Arc>& arcs() const { return arcs_; }
    const Node& node(int idx) const { return nodes_[static_cast<std::size_t>(idx)]; }
    const Arc& arc(int idx) const { return arcs_[static_cast<std::size_t>(idx)]; }
    int node_index(int id) const;
    int arc_index(int id) const;
    const std::vector<IncidentArc>& incident(int node_idx) const {
        return incidence_[static_cast<std::size_t>(node_idx)];
    }
    // endpoint node indices of an arc
    int from_index(int arc_idx) const { return from_idx_[static_cast<std::size_t>(arc_idx)]; }
    int to_index(int arc_idx) const { return to_idx_[static_cast<std::size_t>(arc_idx)]; }
    double min_arc_length() const;
    // planar embedding of an arc point (cosmetic, for outputs)
    Vec2 position(ArcPoint p) const;

private:
    void validate() const;

    std::vector<Node> nodes_;
    std::vector<Arc> arcs_;
    std::vector<int> from_idx_, to_idx_;
    std::vector<std::vector<IncidentArc>> incidence_;
};

// Shortest-path distance along the arcs. |s_x - s_y| on a shared arc beats
// any detour through the endpoints; on a junction network this reduces to
// |x| + |y| across arcs.
double geodesic_distance(const Network& net, ArcPoint x, ArcPoint y);

} // namespace hjnet

#endif
