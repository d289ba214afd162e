#include "hjnet/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace hjnet {

namespace {

void append(std::string& out, const char* fmt, ...) {
    char buf[256];
    va_list ap;
    va_start(ap, fmt);
    std::vsnprintf(buf, sizeof buf, fmt, ap);
    va_end(ap);
    out += buf;
}

} // namespace

std::string snapshot_csv(const GridFunction& v) {
    const Grid& g = v.grid();
    const Network& net = g.network();
    std::string out = "arc_id,s,x_pos,y_pos,value\n";
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= g.cells(static_cast<int>(a)); ++k) {
            ArcPoint p = g.sample_point(static_cast<int>(a), k);
            Vec2 q = net.position(p);
            append(out, "%d,%.17g,%.17g,%.17g,%.17g\n", net.arc(static_cast<int>(a)).id, p.s, q.x,
                   q.y, v.at(static_cast<int>(a), k));
        }
    return out;
}

std::string density_csv(const DensityField& rho, const Grid& grid) {
    const Network& net = grid.network();
    std::string out = "arc_id,s,x_pos,y_pos,rho\n";
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= grid.cells(static_cast<int>(a)); ++k) {
            ArcPoint p = grid.sample_point(static_cast<int>(a), k);
            Vec2 q = net.position(p);
            append(out, "%d,%.17g,%.17g,%.17g,%.17g\n", net.arc(static_cast<int>(a)).id, p.s, q.x,
                   q.y, rho.arc_rho[a][static_cast<std::size_t>(k)]);
        }
    return out;
}

std::string node_density_csv(const DensityField& rho, const Network& net) {
    std::string out = "node_id,rho\n";
    for (std::size_t nd = 0; nd < net.nodes().size(); ++nd)
        append(out, "%d,%.17g\n", net.nodes()[nd].id, rho.node_rho[nd]);
    return out;
}

std::string witness_csv(const std::vector<UpdateWitness>& wits, const Grid& grid) {
    const Network& net = grid.network();
    std::string out = "arc_id,s,branch,alpha_i,s0,arc_j,alpha_j,value\n";
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= grid.cells(static_cast<int>(a)); ++k) {
            int id = grid.sample_id(static_cast<int>(a), k);
            const UpdateWitness& w = wits[static_cast<std::size_t>(id)];
            int arc_j_id = w.arc_j >= 0 ? net.arc(w.arc_j).id : -1;
            append(out, "%d,%.17g,%s,%.17g,%.17g,%d,%.17g,%.17g\n",
                   net.arc(static_cast<int>(a)).id, grid.arc_coord(static_cast<int>(a), k),
                   w.branch == UpdateBranch::stay ? "stay" : "cross", w.alpha_i, w.s0, arc_j_id,
                   w.alpha_j, w.value);
        }
    return out;
}

std::string heatmap_svg(const Grid& grid, const std::vector<std::vector<double>>& values,
                        double vmin, double vmax) {
    const Network& net = grid.network();
    double xmin = kInf, xmax = -kInf, ymin = kInf, ymax = -kInf;
    for (const Node& nd : net.nodes()) {
        xmin = std::min(xmin, nd.position.x);
        xmax = std::max(xmax, nd.position.x);
        ymin = std::min(ymin, nd.position.y);
        ymax = std::max(ymax, nd.position.y);
    }
    double span = std::max({xmax - xmin, ymax - ymin, 1e-9});
    double scale = 600.0 / span;
    auto px = [&](Vec2 p) { return (p.x - xmin) * scale + 20.0; };
    auto py = [&](Vec2 p) { return (ymax - p.y) * scale + 20.0; };

    std::string out;
    append(out, "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" height=\"%d\">\n", 640,
           640);
    double range = std::max(vmax - vmin, 1e-12);
    for (std::size_t a = 0; a < net.arcs().size(); ++a) {
        int n = grid.cells(static_cast<int>(a));
        for (int k = 0; k < n; ++k) {
            Vec2 p0 = net.position(grid.sample_point(static_cast<int>(a), k));
            Vec2 p1 = net.position(grid.sample_point(static_cast<int>(a), k + 1));
            double val = 0.5 * (values[a][static_cast<std::size_t>(k)] +
                                values[a][static_cast<std::size_t>(k) + 1]);
            double t = std::clamp((val - vmin) / range, 0.0, 1.0);
            int r = static_cast<int>(255.0 * t);
            int b = static_cast<int>(255.0 * (1.0 - t));
            append(out,
                   "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                   "stroke=\"rgb(%d,0,%d)\" stroke-width=\"4\" stroke-linecap=\"round\"/>\n",
                   px(p0), py(p0), px(p1), py(p1), r, b);
        }
    }
    out += "</svg>\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write '" + path + "'");
    f << content;
}

} // namespace hjnet
