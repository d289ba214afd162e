#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hjnet/analysis.hpp"
#include "hjnet/io.hpp"
#include "hjnet/scenario.hpp"
#include "hjnet/scheme.hpp"
#include "hjnet/traffic.hpp"

namespace {

using namespace hjnet;

struct CommonOpts {
    std::string scenario;
    std::string out = ".";
    std::optional<double> dx, dt, T, A;
    std::vector<double> snapshots;
    bool svg = false;
    bool witness = false;
};

Scenario load_with_overrides(const CommonOpts& o) {
    Scenario sc = load_scenario(o.scenario);
    if (o.dx) sc.params.dx = *o.dx;
    if (o.dt) sc.params.dt = *o.dt;
    if (o.T) sc.params.T = *o.T;
    if (o.A) {
        std::vector<Node> nodes = sc.network->nodes();
        for (Node& n : nodes)
            if (n.kind == NodeKind::junction) n.flux_limiter = *o.A;
        sc.network = std::make_shared<Network>(std::move(nodes), sc.network->arcs());
    }
    return sc;
}

std::string time_tag(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    std::string s = buf;
    for (char& c : s)
        if (c == '.') c = 'p';
    return s;
}

int run_solve(const CommonOpts& o) {
    Scenario sc = load_with_overrides(o);
    Grid grid = Grid::build(*sc.network, sc.params.dx);
    SemiLagrangian scheme(*sc.network, grid, sc.params);
    GridFunction u0 = make_initial_layer(sc, grid);
    std::vector<double> snaps = o.snapshots;
    if (snaps.empty()) snaps = {sc.params.T};
    SolveResult res = scheme.solve(u0, snaps);
    std::filesystem::create_directories(o.out);
    for (const GridFunction& layer : res.snapshots) {
        std::string base = o.out + "/" + sc.name + "_t" + time_tag(layer.time());
        write_file(base + ".csv", snapshot_csv(layer));
        if (o.svg) {
            std::vector<std::vector<double>> vals(sc.network->arcs().size());
            double vmin = kInf, vmax = -kInf;
            for (std::size_t a = 0; a < vals.size(); ++a)
                for (int k = 0; k <= grid.cells(static_cast<int>(a)); ++k) {
                    double v = layer.at(static_cast<int>(a), k);
                    vals[a].push_back(v);
                    vmin = std::min(vmin, v);
                    vmax = std::max(vmax, v);
                }
            write_file(base + ".svg", heatmap_svg(grid, vals, vmin, vmax));
        }
    }
    if (o.witness) {
        // one extra step from the final layer, dumping the chosen controls
        std::vector<UpdateWitness> wits;
        scheme.step(res.final, res.final.time(), &wits);
        write_file(o.out + "/" + sc.name + "_witness.csv", witness_csv(wits, grid));
    }
    std::printf("solved %s: %d steps, max|control| = %.6g%s\n", sc.name.c_str(), res.steps,
                res.max_abs_control, res.control_clamp_hit ? " (clamped)" : "");
    return 0;
}

int run_probe(double dx, double dt) {
    ProbeResult r = consistency_probe(dx, dt);
    std::printf("%.12g\nbranch=%s\n", r.value, r.branch == UpdateBranch::stay ? "stay" : "cross");
    return 0;
}

int run_converge(const CommonOpts& o, std::vector<double> resolutions, double ratio,
                 const std::string& ref_kind, double fine_dx, double fine_dt,
                 std::optional<double> assert_order, double order_tol) {
    Scenario sc = load_with_overrides(o);
    RefPolicy ref;
    if (ref_kind == "exact-test2") {
        const Network* net = sc.network.get();
        ref.exact = [net](ArcPoint p) {
            return exact_test2(net->arc(p.arc).id, net->position(p));
        };
    } else if (ref_kind == "fine") {
        ref.fine_dx = fine_dx;
        ref.fine_dt = fine_dt > 0.0 ? fine_dt : fine_dx;
    } else {
        throw std::invalid_argument("unknown --ref '" + ref_kind + "'");
    }
    ConvergenceReport rep = convergence_study(sc, resolutions, ratio, sc.params.T, ref);
    std::filesystem::create_directories(o.out);
    write_file(o.out + "/" + sc.name + "_convergence.csv", report_csv(rep));
    for (const auto& row : rep.rows)
        std::printf("dx=%-8g dt=%-8g E_inf=%.6e\n", row.dx, row.dt, row.e_inf);
    std::printf("order=%.4f constant=%.4f\n", rep.order, rep.constant);
    if (assert_order && std::abs(rep.order - *assert_order) > order_tol) {
        std::fprintf(stderr, "hjnet: error: fitted order %.4f misses target %.4f (tol %.4f)\n",
                     rep.order, *assert_order, order_tol);
        return 2;
    }
    return 0;
}

int run_traffic(const CommonOpts& o) {
    Scenario sc = load_with_overrides(o);
    Grid grid = Grid::build(*sc.network, sc.params.dx);
    GridFunction u0 = make_initial_layer(sc, grid);
    std::vector<double> snaps = o.snapshots;
    if (snaps.empty()) snaps = {0.0, sc.params.T};
    double rho_cap = 0.0;
    for (const Arc& a : sc.network->arcs())
        if (const auto* f = std::get_if<FluxCapacityCost>(&a.lagrangian))
            rho_cap = std::max(rho_cap, f->lambda);
    if (rho_cap == 0.0) rho_cap = -1.0;
    EvacuationResult res =
        run_evacuation(*sc.network, grid, sc.params, u0, snaps, rho_cap);
    std::filesystem::create_directories(o.out);
    for (std::size_t i = 0; i < res.densities.size(); ++i) {
        const DensityField& rho = res.densities[i];
        std::string base = o.out + "/" + sc.name + "_rho_t" + time_tag(rho.time);
        write_file(base + ".csv", density_csv(rho, grid));
        write_file(base + "_nodes.csv", node_density_csv(rho, *sc.network));
        if (o.svg) write_file(base + ".svg", heatmap_svg(grid, rho.arc_rho, 0.0, std::max(rho_cap, rho.max_rho)));
        std::printf("t=%-6g rho in [%.4f, %.4f], %d cap violations\n", rho.time, rho.min_rho,
                    rho.max_rho, rho.cap_violations);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-Lagrangian solver for Hamilton-Jacobi equations on road networks"};
    app.require_subcommand(1);

    CommonOpts o;
    auto add_common = [&](CLI::App* cmd, bool need_scenario = true) {
        if (need_scenario) cmd->add_option("--scenario", o.scenario, "scenario file")->required();
        cmd->add_option("--out", o.out, "output directory");
        cmd->add_option("--dx", o.dx, "space step override");
        cmd->add_option("--dt", o.dt, "time step override");
        cmd->add_option("--T", o.T, "horizon override");
        cmd->add_option("--A", o.A, "flux limiter override (all junctions)");
        cmd->add_option("--snapshots", o.snapshots, "snapshot times")->delimiter(',');
        cmd->add_flag("--svg", o.svg, "write SVG heat maps");
        cmd->add_flag("--witness", o.witness, "dump per-sample optimal controls");
    };

    auto* solve_cmd = app.add_subcommand("solve", "run a scenario and write value snapshots");
    add_common(solve_cmd);

    auto* probe_cmd = app.add_subcommand("probe", "consistency counterexample probe");
    double probe_dx = 0.01, probe_dt = 0.005;
    probe_cmd->add_option("--dx", probe_dx, "space step")->required();
    probe_cmd->add_option("--dt", probe_dt, "time step")->required();

    auto* conv_cmd = app.add_subcommand("converge", "convergence study against a reference");
    add_common(conv_cmd);
    std::vector<double> resolutions;
    double ratio = 2.5, fine_dx = 5e-4, fine_dt = 0.0, order_tol = 0.2;
    std::optional<double> assert_order;
    std::string ref_kind = "exact-test2";
    conv_cmd->add_option("--resolutions", resolutions, "dx values")->delimiter(',')->required();
    conv_cmd->add_option("--ratio", ratio, "dt/dx ratio");
    conv_cmd->add_option("--ref", ref_kind, "reference: exact-test2 | fine");
    conv_cmd->add_option("--fine-dx", fine_dx, "fine reference dx");
    conv_cmd->add_option("--fine-dt", fine_dt, "fine reference dt (defaults to fine dx)");
    conv_cmd->add_option("--assert-order", assert_order, "fail unless fitted order matches");
    conv_cmd->add_option("--tol", order_tol, "tolerance for --assert-order");

    auto* traffic_cmd = app.add_subcommand("traffic", "evacuation run with density snapshots");
    add_common(traffic_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1; // bad arguments are validation errors
    }

    try {
        if (solve_cmd->parsed()) return run_solve(o);
        if (probe_cmd->parsed()) return run_probe(probe_dx, probe_dt);
        if (conv_cmd->parsed())
            return run_converge(o, resolutions, ratio, ref_kind, fine_dx, fine_dt, assert_order,
                                order_tol);
        if (traffic_cmd->parsed()) return run_traffic(o);
    } catch (const std::exception& e) {
        std::cerr << "hjnet: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
