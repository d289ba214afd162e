#include "hjnet/analysis.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <stdexcept>

namespace hjnet {

double error_sup(const GridFunction& w, const std::function<double(ArcPoint)>& ref) {
    const Grid& g = w.grid();
    const Network& net = g.network();
    double e = 0.0;
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= g.cells(static_cast<int>(a)); ++k)
            e = std::max(e, std::abs(w.at(static_cast<int>(a), k) -
                                     ref(g.sample_point(static_cast<int>(a), k))));
    return e;
}

double error_sup(const GridFunction& w, const GridFunction& fine) {
    const Grid& gc = w.grid();
    const Grid& gf = fine.grid();
    double q = gc.dx() / gf.dx();
    long ratio = std::lround(q);
    if (ratio < 1 || std::abs(q - static_cast<double>(ratio)) > 1e-9)
        throw std::invalid_argument("error_sup: grids are not commensurate");
    const Network& net = gc.network();
    if (&net != &gf.network() && net.arcs().size() != gf.network().arcs().size())
        throw std::invalid_argument("error_sup: different networks");
    double e = 0.0;
    for (std::size_t a = 0; a < net.arcs().size(); ++a)
        for (int k = 0; k <= gc.cells(static_cast<int>(a)); ++k)
            e = std::max(e, std::abs(w.at(static_cast<int>(a), k) -
                                     fine.at(static_cast<int>(a), k * static_cast<int>(ratio))));
    return e;
}

double exact_test2(int arc_number, Vec2 p) {
    auto on_segment = [&](Vec2 a, Vec2 b) {
        double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        double dot = (p.x - a.x) * (b.x - a.x) + (p.y - a.y) * (b.y - a.y);
        double len2 = norm2(b - a);
        return std::abs(cross) <= 1e-9 && dot >= -1e-9 && dot <= len2 + 1e-9;
    };
    switch (arc_number) {
    case 1:
        if (!on_segment({0.0, 1.0}, {0.0, 0.0}))
            throw std::invalid_argument("exact_test2: point is not on arc 1");
        return std::sqrt(2.0) + p.y;
    case 2: {
        if (!on_segment({0.0, 0.0}, {1.0, -1.0}))
            throw std::invalid_argument("exact_test2: point is not on arc 2");
        double exit_branch = 2.0 * std::hypot(p.x - 1.0, p.y + 1.0);
        double node_branch = std::sqrt(2.0) + 2.0 * std::hypot(p.x, p.y);
        return std::min(exit_branch, node_branch);
    }
    case 3:
        if (!on_segment({0.0, 0.0}, {-1.0, -1.0}))
            throw std::invalid_argument("exact_test2: point is not on arc 3");
        return std::hypot(p.x + 1.0, p.y + 1.0);
    default:
        throw std::invalid_argument("exact_test2: arc number must be 1, 2 or 3");
    }
}

ProbeResult consistency_probe(double dx, double dt) {
    // Two half-lines, truncated: the home arc carries cost a^2/2 + 2, the
    // other a^2/2 + 1, flux limiter A = -1. Test data is 1 - x on the real
    // line, i.e. 1 + s on the home arc and 1 - s on the other one.
    double mu = std::max(6.0, 2.0 * dx / dt);
    int cells = static_cast<int>(std::ceil(mu * dt / dx)) + 2;
    double len = cells * dx;
    std::vector<Node> nodes{
        {0, NodeKind::junction, {0.0, 0.0}, -1.0, std::nullopt},
        {1, NodeKind::boundary, {-len, 0.0}, -kInf,
         BoundaryCondition{BcKind::dirichlet, 1.0 - len, {}, {}}},
        {2, NodeKind::boundary, {len, 0.0}, -kInf,
         BoundaryCondition{BcKind::dirichlet, 1.0 + len, {}, {}}},
    };
    std::vector<Arc> arcs{
        {1, 0, 1, len, QuadraticCost{1.0}}, // arrival side
        {2, 0, 2, len, QuadraticCost{2.0}}, // home side, probe lives here
    };
    Network net(std::move(nodes), std::move(arcs));
    Grid grid = Grid::build(net, dx);
    GridFunction phi = GridFunction::sample(
        grid, [&](ArcPoint p) { return p.arc == 0 ? 1.0 - p.s : 1.0 + p.s; });
    SemiLagrangian scheme(net, grid, SchemeParams{dx, dt, dt, mu, 0, 1e-13});
    UpdateWitness w;
    ProbeResult r;
    r.value = scheme.update_interior(phi, 1, 1, &w);
    r.branch = w.branch;
    r.stay_form = 1.0 + dx + 1.5 * dt;
    r.cross_form = 1.0 + std::sqrt(3.0) * dx + 0.5 * dt;
    return r;
}

double probe_switch_ratio(double dx, double tol) {
    double lo = 0.5, hi = 1.0; // stay wins at lo, cross at hi
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        if (consistency_probe(dx, mid * dx).branch == UpdateBranch::stay)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

ConvergenceReport convergence_study(const Scenario& sc, const std::vector<double>& resolutions,
                                    double ratio, double T, const RefPolicy& ref) {
    if (resolutions.size() < 3)
        throw std::invalid_argument("convergence_study: need at least 3 resolutions");
    const Network& net = *sc.network;

    Grid fine_grid; // must outlive fine_layer, which references it
    GridFunction fine_layer;
    if (!ref.exact) {
        if (!(ref.fine_dx > 0.0) || !(ref.fine_dt > 0.0))
            throw std::invalid_argument("convergence_study: fine-grid reference needs dx and dt");
        fine_grid = Grid::build(net, ref.fine_dx);
        SchemeParams p = sc.params;
        p.dx = ref.fine_dx;
        p.dt = ref.fine_dt;
        p.T = T;
        SemiLagrangian scheme(net, fine_grid, p);
        fine_layer = scheme.solve(make_initial_layer(sc, fine_grid)).final;
    }

    ConvergenceReport rep;
    for (double dx : resolutions) {
        Grid g = Grid::build(net, dx);
        SchemeParams p = sc.params;
        p.dx = dx;
        p.dt = ratio * dx;
        p.T = T;
        SemiLagrangian scheme(net, g, p);
        GridFunction w = scheme.solve(make_initial_layer(sc, g)).final;
        double e = ref.exact ? error_sup(w, ref.exact) : error_sup(w, fine_layer);
        rep.rows.push_back({dx, p.dt, e});
    }

    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    double n = static_cast<double>(rep.rows.size());
    for (const auto& r : rep.rows) {
        double lx = std::log(r.dx), ly = std::log(r.e_inf);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    rep.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    rep.constant = std::exp((sy - rep.order * sx) / n);
    return rep;
}

std::string report_csv(const ConvergenceReport& rep) {
    std::string out = "dx,dt,E_inf\n";
    char buf[128];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.dx, r.dt, r.e_inf);
        out += buf;
    }
    std::snprintf(buf, sizeof buf, "# order=%.6g constant=%.6g\n", rep.order, rep.constant);
    out += buf;
    return out;
}

} // namespace hjnet
