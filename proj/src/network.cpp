#include "hjnet/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <unordered_map>

namespace hjnet {

double BoundaryCondition::value(double t) const {
    if (times.empty()) return constant;
    if (t <= times.front()) return values.front();
    if (t >= times.back()) return values.back();
    auto it = std::upper_bound(times.begin(), times.end(), t);
    std::size_t k = static_cast<std::size_t>(it - times.begin()) - 1;
    double w = (t - times[k]) / (times[k + 1] - times[k]);
    return values[k] + w * (values[k + 1] - values[k]);
}

Network::Network(std::vector<Node> nodes, std::vector<Arc> arcs)
    : nodes_(std::move(nodes)), arcs_(std::move(arcs)) {
    std::unordered_map<int, int> nidx;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (!nidx.emplace(nodes_[i].id, static_cast<int>(i)).second)
            throw std::invalid_argument("duplicate node id " + std::to_string(nodes_[i].id));
    }
    from_idx_.reserve(arcs_.size());
    to_idx_.reserve(arcs_.size());
    incidence_.assign(nodes_.size(), {});
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        auto itf = nidx.find(arcs_[a].from);
        auto itt = nidx.find(arcs_[a].to);
        if (itf == nidx.end() || itt == nidx.end())
            throw std::invalid_argument("arc " + std::to_string(arcs_[a].id) +
                                        " references an unknown node");
        from_idx_.push_back(itf->second);
        to_idx_.push_back(itt->second);
        incidence_[static_cast<std::size_t>(itf->second)].push_back({static_cast<int>(a), true});
        incidence_[static_cast<std::size_t>(itt->second)].push_back({static_cast<int>(a), false});
    }
    validate();
}

void Network::validate() const {
    if (nodes_.empty() || arcs_.empty())
        throw std::invalid_argument("network needs at least one node and one arc");
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        const Arc& arc = arcs_[a];
        if (!(arc.length > 0.0) || !std::isfinite(arc.length))
            throw std::invalid_argument("arc " + std::to_string(arc.id) + ": length must be positive");
        if (from_idx_[a] == to_idx_[a])
            throw std::invalid_argument("arc " + std::to_string(arc.id) + ": endpoints must differ");
        hjnet::validate(arc.lagrangian);
    }
    for (std::size_t n = 0; n < nodes_.size(); ++n) {
        const Node& node = nodes_[n];
        std::size_t deg = incidence_[n].size();
        if (node.kind == NodeKind::boundary) {
            if (deg != 1)
                throw std::invalid_argument("boundary node " + std::to_string(node.id) +
                                            " must have exactly one incident arc");
            if (!node.bc)
                throw std::invalid_argument("boundary node " + std::to_string(node.id) +
                                            " needs a boundary condition");
            if (node.bc->times.size() != node.bc->values.size())
                throw std::invalid_argument("boundary node " + std::to_string(node.id) +
                                            ": mismatched bc table");
            if (!std::isfinite(node.bc->value(0.0)))
                throw std::invalid_argument("boundary node " + std::to_string(node.id) +
                                            ": non-finite bc value");
        } else {
            if (node.bc)
                throw std::invalid_argument("junction node " + std::to_string(node.id) +
                                            " cannot carry a boundary condition");
            if (deg == 0)
                throw std::invalid_argument("junction node " + std::to_string(node.id) +
                                            " is isolated");
            if (std::isnan(node.flux_limiter) || node.flux_limiter == kInf)
                throw std::invalid_argument("junction node " + std::to_string(node.id) +
                                            ": flux limiter must be finite or -inf");
        }
    }
    // connectivity
    std::vector<char> seen(nodes_.size(), 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    while (!q.empty()) {
        int n = q.front();
        q.pop();
        for (const auto& inc : incidence_[static_cast<std::size_t>(n)]) {
            int other = inc.at_from ? to_idx_[static_cast<std::size_t>(inc.arc)]
                                    : from_idx_[static_cast<std::size_t>(inc.arc)];
            if (!seen[static_cast<std::size_t>(other)]) {
                seen[static_cast<std::size_t>(other)] = 1;
                q.push(other);
            }
        }
    }
    if (std::count(seen.begin(), seen.end(), char(1)) != static_cast<long>(nodes_.size()))
        throw std::invalid_argument("network is not connected");
}

int Network::node_index(int id) const {
    for (std::size_t i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].id == id) return static_cast<int>(i);
    throw std::invalid_argument("unknown node id " + std::to_string(id));
}

int Network::arc_index(int id) const {
    for (std::size_t i = 0; i < arcs_.size(); ++i)
        if (arcs_[i].id == id) return static_cast<int>(i);
    throw std::invalid_argument("unknown arc id " + std::to_string(id));
}

double Network::min_arc_length() const {
    double m = kInf;
    for (const Arc& a : arcs_) m = std::min(m, a.length);
    return m;
}

Vec2 Network::position(ArcPoint p) const {
    const Arc& a = arc(p.arc);
    double t = std::clamp(p.s / a.length, 0.0, 1.0);
    return lerp(node(from_index(p.arc)).position, node(to_index(p.arc)).position, t);
}

double geodesic_distance(const Network& net, ArcPoint x, ArcPoint y) {
    auto check = [&](ArcPoint p) {
        if (p.arc < 0 || p.arc >= static_cast<int>(net.arcs().size()) || p.s < -1e-12 ||
            p.s > net.arc(p.arc).length + 1e-12)
            throw std::invalid_argument("geodesic_distance: point off the network");
    };
    check(x);
    check(y);

    double best = kInf;
    if (x.arc == y.arc) best = std::abs(x.s - y.s);

    // Dijkstra over the node graph, seeded with the offsets of x to its arc ends.
    std::size_t n = net.nodes().size();
    std::vector<double> dist(n, kInf);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    auto push = [&](int node, double d) {
        if (d < dist[static_cast<std::size_t>(node)]) {
            dist[static_cast<std::size_t>(node)] = d;
            pq.push({d, node});
        }
    };
    push(net.from_index(x.arc), x.s);
    push(net.to_index(x.arc), net.arc(x.arc).length - x.s);
    while (!pq.empty()) {
        auto [d, node] = pq.top();
        pq.pop();
        if (d > dist[static_cast<std::size_t>(node)]) continue;
        for (const auto& inc : net.incident(node)) {
            int other = inc.at_from ? net.to_index(inc.arc) : net.from_index(inc.arc);
            push(other, d + net.arc(inc.arc).length);
        }
    }
    best = std::min(best, dist[static_cast<std::size_t>(net.from_index(y.arc))] + y.s);
    best = std::min(best, dist[static_cast<std::size_t>(net.to_index(y.arc))] +
                              net.arc(y.arc).length - y.s);
    return best;
}

} // namespace hjnet
