#ifndef HJNET_GRID_HPP
#define HJNET_GRID_HPP

#include <functional>
#include <vector>

#include "hjnet/network.hpp"

namespace hjnet {

// Uniform discretization of every arc with a shared sample at each node.
// Sample ids: node samples first (id == node index), then arc interiors.
class Grid {
public:
    static Grid build(const Network& net, double dx);

    const Network& network() const { return *net_; }
    double dx() const { return dx_; }
    int num_samples() const { return num_samples_; }
    int cells(int arc) const { return cells_[static_cast<std::size_t>(arc)]; }
    // global sample id of sample k on an arc, k in [0, cells(arc)]
    int sample_id(int arc, int k) const;
    int node_sample(int node_idx) const { return node_idx; }
    double arc_coord([[maybe_unused]] int arc, int k) const { return dx_ * k; }
    ArcPoint sample_point(int arc, int k) const { return {arc, arc_coord(arc, k)}; }

    // One representative (arc, k) per global sample, lowest arc index first;
    // node samples report the lowest-index incident arc.
    ArcPoint representative(int sample) const { return rep_[static_cast<std::size_t>(sample)]; }

private:
    const Network* net_ = nullptr;
    double dx_ = 0.0;
    int num_samples_ = 0;
    std::vector<int> cells_;
    std::vector<int> interior_base_; // first interior sample id per arc
    std::vector<ArcPoint> rep_;
};

// One value per grid sample plus per-node ghost values for Neumann ends.
class GridFunction {
public:
    GridFunction() = default;
    // The grid is referenced, not copied; it must outlive the layer.
    GridFunction(const Grid& grid, double time = 0.0);
    GridFunction(Grid&&, double = 0.0) = delete;
    static GridFunction sample(const Grid& grid, const std::function<double(ArcPoint)>& f,
                               double time = 0.0);
    static GridFunction sample(Grid&&, const std::function<double(ArcPoint)>&, double = 0.0) =
        delete;

    const Grid& grid() const { return *grid_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    double operator[](int sample) const { return v_[static_cast<std::size_t>(sample)]; }
    double& operator[](int sample) { return v_[static_cast<std::size_t>(sample)]; }
    double at(int arc, int k) const { return v_[static_cast<std::size_t>(grid_->sample_id(arc, k))]; }
    double& at(int arc, int k) { return v_[static_cast<std::size_t>(grid_->sample_id(arc, k))]; }
    int size() const { return static_cast<int>(v_.size()); }

    bool has_ghost(int node_idx) const;
    double ghost(int node_idx) const { return ghost_[static_cast<std::size_t>(node_idx)]; }
    void set_ghost(int node_idx, double value) { ghost_[static_cast<std::size_t>(node_idx)] = value; }
    void clear_ghosts();

    bool all_finite() const;
    // largest |difference| / dx over adjacent samples (path Lipschitz constant)
    double discrete_lipschitz() const;

private:
    const Grid* grid_ = nullptr;
    double time_ = 0.0;
    std::vector<double> v_;
    std::vector<double> ghost_; // per node; NaN when unset
};

// Piecewise-linear interpolation along one arc; exact at samples. `s` may
// extend one cell beyond an end that carries a ghost value.
double interpolate(const GridFunction& v, int arc, double s);

} // namespace hjnet

#endif
