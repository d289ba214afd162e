#include "hjnet/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hjnet {

Grid Grid::build(const Network& net, double dx) {
    if (!(dx > 0.0)) throw std::invalid_argument("build_grid: dx must be positive");
    Grid g;
    g.net_ = &net;
    g.dx_ = dx;
    std::size_t narcs = net.arcs().size();
    g.cells_.resize(narcs);
    g.interior_base_.resize(narcs);
    int next = static_cast<int>(net.nodes().size());
    g.rep_.assign(static_cast<std::size_t>(next), ArcPoint{-1, 0.0});
    for (std::size_t a = 0; a < narcs; ++a) {
        double len = net.arc(static_cast<int>(a)).length;
        double n_real = len / dx;
        int n = static_cast<int>(std::llround(n_real));
        if (n < 1 || std::abs(len - n * dx) > 1e-9)
            throw std::invalid_argument("build_grid: arc " +
                                        std::to_string(net.arc(static_cast<int>(a)).id) +
                                        " length is not a multiple of dx");
        g.cells_[a] = n;
        g.interior_base_[a] = next;
        next += n - 1;
        for (int k = 1; k < n; ++k) g.rep_.push_back({static_cast<int>(a), k * dx});
    }
    g.num_samples_ = next;
    for (std::size_t nd = 0; nd < net.nodes().size(); ++nd) {
        const auto& inc = net.incident(static_cast<int>(nd));
        int arc = inc.front().arc;
        bool at_from = inc.front().at_from;
        for (const auto& ia : inc)
            if (ia.arc < arc) { arc = ia.arc; at_from = ia.at_from; }
        g.rep_[nd] = {arc, at_from ? 0.0 : net.arc(arc).length};
    }
    return g;
}

int Grid::sample_id(int arc, int k) const {
    int n = cells_[static_cast<std::size_t>(arc)];
    if (k < 0 || k > n) throw std::out_of_range("sample index outside arc");
    if (k == 0) return net_->from_index(arc);
    if (k == n) return net_->to_index(arc);
    return interior_base_[static_cast<std::size_t>(arc)] + k - 1;
}

GridFunction::GridFunction(const Grid& grid, double time)
    : grid_(&grid), time_(time), v_(static_cast<std::size_t>(grid.num_samples()), 0.0),
      ghost_(grid.network().nodes().size(), std::numeric_limits<double>::quiet_NaN()) {}

GridFunction GridFunction::sample(const Grid& grid, const std::function<double(ArcPoint)>& f,
                                  double time) {
    GridFunction out(grid, time);
    const Network& net = grid.network();
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= grid.cells(static_cast<int>(a)); ++k)
            out.at(static_cast<int>(a), k) = f(grid.sample_point(static_cast<int>(a), k));
    return out;
}

bool GridFunction::has_ghost(int node_idx) const {
    return !std::isnan(ghost_[static_cast<std::size_t>(node_idx)]);
}

void GridFunction::clear_ghosts() {
    std::fill(ghost_.begin(), ghost_.end(), std::numeric_limits<double>::quiet_NaN());
}

bool GridFunction::all_finite() const {
    for (double x : v_)
        if (!std::isfinite(x)) return false;
    return true;
}

double GridFunction::discrete_lipschitz() const {
    double lip = 0.0;
    const Network& net = grid_->network();
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k < grid_->cells(static_cast<int>(a)); ++k)
            lip = std::max(lip, std::abs(at(static_cast<int>(a), k + 1) - at(static_cast<int>(a), k)));
    return lip / grid_->dx();
}

double interpolate(const GridFunction& v, int arc, double s) {
    const Grid& g = v.grid();
    const Network& net = g.network();
    double dx = g.dx();
    int n = g.cells(arc);
    double len = n * dx;
    if (s >= 0.0 && s <= len) {
        int k = static_cast<int>(s / dx);
        if (k >= n) k = n - 1;
        double a = v.at(arc, k);
        double b = v.at(arc, k + 1);
        double t = (s - k * dx) / dx;
        return a + t * (b - a);
    }
    if (s < 0.0 && s >= -dx) {
        int node = net.from_index(arc);
        if (v.has_ghost(node)) {
            double t = -s / dx;
            return v.at(arc, 0) + t * (v.ghost(node) - v.at(arc, 0));
        }
    } else if (s > len && s <= len + dx) {
        int node = net.to_index(arc);
        if (v.has_ghost(node)) {
            double t = (s - len) / dx;
            return v.at(arc, n) + t * (v.ghost(node) - v.at(arc, n));
        }
    }
    throw std::out_of_range("interpolate: coordinate outside the arc's grid range");
}

} // namespace hjnet
