// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerances in code.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "hjnet/analysis.hpp"
#include "hjnet/scenario.hpp"
#include "hjnet/scheme.hpp"
#include "hjnet/traffic.hpp"

using namespace hjnet;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("criterion %d: %s - %s (%s)\n", criterion, pass ? "PASS" : "FAIL", what.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

Scenario load(const char* name) {
    return load_scenario(std::string(HJNET_SCENARIO_DIR) + "/" + name);
}

Scenario with_flux_limiter(const Scenario& sc, double A) {
    Scenario out = sc;
    std::vector<Node> nodes = sc.network->nodes();
    for (Node& n : nodes)
        if (n.kind == NodeKind::junction) n.flux_limiter = A;
    out.network = std::make_shared<Network>(std::move(nodes), sc.network->arcs());
    return out;
}

// ---- criterion 1: counterexample exactness --------------------------------
void criterion1() {
    auto t0 = Clock::now();
    const double switch_ratio = std::sqrt(3.0) - 1.0;
    double worst = 0.0;
    int bad_branch = 0;
    std::vector<double> dxs{0.1, 0.05, 0.02, 0.01, 0.005};
    std::vector<double> ratios{0.4, 0.6, 0.7, 1.0};
    int pairs = 0;
    for (double dx : dxs)
        for (double r : ratios) {
            double dt = r * dx;
            ProbeResult p = consistency_probe(dx, dt);
            bool stay_regime = r <= switch_ratio;
            double expect = stay_regime ? 1.0 + dx + 1.5 * dt
                                        : 1.0 + std::sqrt(3.0) * dx + 0.5 * dt;
            worst = std::max(worst, std::abs(p.value - expect));
            if ((p.branch == UpdateBranch::stay) != stay_regime) ++bad_branch;
            ++pairs;
        }
    double located = probe_switch_ratio(0.01, 1e-10);
    double switch_err = std::abs(located - switch_ratio);
    double elapsed = seconds_since(t0);
    bool pass = pairs == 20 && worst <= 1e-10 && bad_branch == 0 && switch_err <= 1e-9 &&
                elapsed < 1.0;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "max |value - closed form| = %.3g over %d pairs, switch at ratio %.12f "
                  "(err %.2g), %d branch mismatches, %.2fs",
                  worst, pairs, located, switch_err, bad_branch, elapsed);
    report(1, pass, "counterexample values and branch switch", buf);
}

// ---- criterion 2: test2 convergence against the exact steady state --------
void criterion2() {
    auto t0 = Clock::now();
    Scenario sc = load("test2.json");
    const Network* net = sc.network.get();
    RefPolicy ref;
    ref.exact = [net](ArcPoint p) { return exact_test2(net->arc(p.arc).id, net->position(p)); };
    ConvergenceReport rep = convergence_study(sc, {0.04, 0.02, 0.01, 0.005}, 2.5, 2.0, ref);
    double elapsed = seconds_since(t0);
    bool order_ok = rep.order >= 0.8 && rep.order <= 1.2;
    bool const_ok = rep.constant >= 6.5 / 2.0 && rep.constant <= 6.5 * 2.0;
    bool pass = order_ok && const_ok && elapsed < 60.0;
    char buf[256];
    std::snprintf(buf, sizeof buf, "order %.3f in [0.8,1.2], constant %.2f vs 6.5 within x2, %.1fs",
                  rep.order, rep.constant, elapsed);
    report(2, pass, "test2 convergence to the exact steady state", buf);
}

// ---- criterion 3: test1 convergence against a fine reference --------------
void criterion3() {
    auto t0 = Clock::now();
    Scenario base = load("test1.json");
    bool pass = true;
    std::string detail;
    struct Case {
        double A;
        double target_const;
    };
    for (Case c : {Case{0.0, 4.5}, Case{-0.2, 2.0}}) {
        Scenario sc = with_flux_limiter(base, c.A);
        RefPolicy ref;
        ref.fine_dx = 5e-4;
        ref.fine_dt = 5e-4;
        ConvergenceReport rep = convergence_study(sc, {0.02, 0.01, 0.005}, 2.5, 0.2, ref);
        bool order_ok = rep.order >= 0.8 && rep.order <= 1.2;
        bool ratios_ok = true;
        for (std::size_t i = 0; i + 1 < rep.rows.size(); ++i) {
            double q = rep.rows[i].e_inf / rep.rows[i + 1].e_inf;
            ratios_ok = ratios_ok && q >= 1.6 && q <= 2.4;
        }
        bool const_ok =
            rep.constant >= c.target_const / 2.0 && rep.constant <= c.target_const * 2.0;
        pass = pass && order_ok && ratios_ok && const_ok;
        char buf[200];
        std::snprintf(buf, sizeof buf,
                      "[A=%g: order %.3f %s, ratios %s, constant %.2f vs %.1fx2 %s] ", c.A,
                      rep.order, order_ok ? "ok" : "off", ratios_ok ? "ok" : "off", rep.constant,
                      c.target_const, const_ok ? "ok" : "off");
        detail += buf;
    }
    double elapsed = seconds_since(t0);
    pass = pass && elapsed < 120.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.1fs", elapsed);
    detail += buf;
    report(3, pass, "test1 convergence to a fine-grid reference", detail);
}

std::shared_ptr<Network> property_network() {
    std::vector<Node> nodes{
        {0, NodeKind::junction, {0, 0}, -0.3, std::nullopt},
        {1, NodeKind::boundary, {1, 0}, -kInf, BoundaryCondition{BcKind::neumann, 0.0, {}, {}}},
        {2, NodeKind::boundary, {0, 1}, -kInf, BoundaryCondition{BcKind::neumann, 0.0, {}, {}}},
        {3, NodeKind::boundary, {-1, -1}, -kInf, BoundaryCondition{BcKind::neumann, 0.0, {}, {}}}};
    std::vector<Arc> arcs{{1, 0, 1, 1.0, QuadraticCost{0.5}},
                          {2, 0, 2, 1.0, QuadraticCost{1.0}},
                          {3, 0, 3, 1.0, FluxCapacityCost{0.8}}};
    return std::make_shared<Network>(std::move(nodes), std::move(arcs));
}

// ---- criterion 4: monotonicity --------------------------------------------
void criterion4() {
    auto net = property_network();
    Grid g = Grid::build(*net, 0.1);
    SemiLagrangian scheme(*net, g, SchemeParams{0.1, 0.08, 0.08, 3.0});
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> U(-1.0, 1.0), Pos(0.0, 0.7);
    double worst = -kInf;
    for (int trial = 0; trial < 100; ++trial) {
        GridFunction v1(g), v2(g);
        for (int i = 0; i < g.num_samples(); ++i) {
            v1[i] = U(rng);
            v2[i] = v1[i] + Pos(rng);
        }
        scheme.set_ghosts(v1, 0.0);
        scheme.set_ghosts(v2, 0.0);
        GridFunction w1 = scheme.step(v1, 0.0);
        GridFunction w2 = scheme.step(v2, 0.0);
        for (int i = 0; i < g.num_samples(); ++i) worst = std::max(worst, w1[i] - w2[i]);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max violation %.3g over 100 ordered pairs, slack 1e-12", worst);
    report(4, worst <= 1e-12, "monotonicity of the layer update", buf);
}

// ---- criterion 5: commutation with constants ------------------------------
void criterion5() {
    auto net = property_network();
    Grid g = Grid::build(*net, 0.1);
    SemiLagrangian scheme(*net, g, SchemeParams{0.1, 0.08, 0.08, 3.0});
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> U(-1.0, 1.0), C(-5.0, 5.0);
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        GridFunction v(g);
        for (int i = 0; i < g.num_samples(); ++i) v[i] = U(rng);
        double c = C(rng);
        GridFunction vc = v;
        for (int i = 0; i < g.num_samples(); ++i) vc[i] += c;
        scheme.set_ghosts(v, 0.0);
        scheme.set_ghosts(vc, 0.0);
        GridFunction w = scheme.step(v, 0.0);
        GridFunction wc = scheme.step(vc, 0.0);
        for (int i = 0; i < g.num_samples(); ++i)
            worst = std::max(worst, std::abs(wc[i] - w[i] - c));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |S[v+c] - S[v] - c| = %.3g over 50 trials, slack 1e-12",
                  worst);
    report(5, worst <= 1e-12, "constant commutation", buf);
}

// ---- criterion 6: stability via the one-step defect ------------------------
void criterion6() {
    Scenario sc = load("test1.json");
    Grid g = Grid::build(*sc.network, sc.params.dx);
    SemiLagrangian scheme(*sc.network, g, sc.params);
    GridFunction u0 = make_initial_layer(sc, g);
    scheme.set_ghosts(u0, 0.0);
    GridFunction one = scheme.step(u0, 0.0);
    double K = 0.0;
    for (int i = 0; i < g.num_samples(); ++i)
        K = std::max(K, std::abs(one[i] - u0[i]) / sc.params.dt);
    GridFunction layer = u0;
    double worst_excess = -kInf;
    int N = sc.params.num_steps();
    for (int n = 1; n <= N; ++n) {
        layer = scheme.step(layer, (n - 1) * sc.params.dt);
        for (int i = 0; i < g.num_samples(); ++i)
            worst_excess =
                std::max(worst_excess, std::abs(layer[i] - u0[i]) - K * n * sc.params.dt);
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "K = %.4f, max excess over K*t_n: %.3g", K, worst_excess);
    report(6, worst_excess <= 1e-10, "stability bound |w(t_n) - u0| <= K t_n", buf);
}

// ---- criterion 7: Lipschitz constant under refinement ----------------------
void criterion7() {
    Scenario sc = load("test1.json");
    auto lip_at = [&](double dx) {
        Grid g = Grid::build(*sc.network, dx);
        SchemeParams p = sc.params;
        p.dx = dx;
        p.dt = 2.5 * dx;
        SemiLagrangian scheme(*sc.network, g, p);
        return scheme.solve(make_initial_layer(sc, g)).final.discrete_lipschitz();
    };
    double l1 = lip_at(0.01);
    double l2 = lip_at(0.005);
    double rel = std::abs(l1 - l2) / std::max(l1, l2);
    char buf[128];
    std::snprintf(buf, sizeof buf, "Lip(dx=0.01) = %.4f, Lip(dx=0.005) = %.4f, drift %.2f%%", l1,
                  l2, 100.0 * rel);
    report(7, rel <= 0.10, "discrete Lipschitz constant stable across refinement", buf);
}

// ---- criterion 8: junction pinning at A = 0 --------------------------------
void criterion8() {
    Scenario sc = load("test1.json"); // ships with A = 0
    Grid g = Grid::build(*sc.network, sc.params.dx);
    SchemeParams p = sc.params;
    p.T = 2.0;
    SemiLagrangian scheme(*sc.network, g, p);
    GridFunction layer = make_initial_layer(sc, g);
    scheme.set_ghosts(layer, 0.0);
    int junction = g.node_sample(sc.network->node_index(0));
    double worst = 0.0;
    int N = p.num_steps();
    for (int n = 1; n <= N; ++n) {
        layer = scheme.step(layer, (n - 1) * p.dt);
        worst = std::max(worst, std::abs(layer[junction]));
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "max |w(t_n, 0)| = %.3g over %d steps", worst, N);
    report(8, worst <= 1e-12, "junction value pinned at zero for A = 0", buf);
}

// ---- criterion 9: traffic smoke test ---------------------------------------
void criterion9() {
    auto t0 = Clock::now();
    Scenario sc = load("rouen.json");
    bool pass = true;
    std::string detail;
    try {
        Grid g = Grid::build(*sc.network, sc.params.dx);
        GridFunction u0 = make_initial_layer(sc, g);
        EvacuationResult res =
            run_evacuation(*sc.network, g, sc.params, u0, {0.0, 0.5, 1.0, 1.5}, 1.0);
        double initial_arc_max = -kInf;
        for (std::size_t a = 0; a < res.densities.front().arc_rho.size(); ++a)
            for (double r : res.densities.front().arc_rho[a])
                initial_arc_max = std::max(initial_arc_max, r);
        double node_peak = -kInf;
        double node_min = kInf;
        bool finite = true;
        for (std::size_t i = 0; i < res.densities.size(); ++i) {
            const DensityField& rho = res.densities[i];
            finite = finite && std::isfinite(rho.min_rho) && std::isfinite(rho.max_rho);
            for (std::size_t a = 0; a < rho.arc_rho.size(); ++a)
                for (double r : rho.arc_rho[a]) finite = finite && std::isfinite(r);
            for (double r : rho.node_rho) {
                finite = finite && std::isfinite(r);
                if (i > 0) node_peak = std::max(node_peak, r);
                node_min = std::min(node_min, r);
            }
        }
        double elapsed = seconds_since(t0);
        pass = finite && node_min >= 0.0 && node_peak > initial_arc_max && elapsed < 120.0;
        char buf[256];
        std::snprintf(buf, sizeof buf,
                      "finite=%s, min node rho %.3g, node peak %.3f > initial arc max %.3f, %.1fs",
                      finite ? "yes" : "no", node_min, node_peak, initial_arc_max, elapsed);
        detail = buf;
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    report(9, pass, "evacuation run completes with congestion formation", detail);
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    std::printf("%d of 9 criteria passed\n", 9 - failures);
    return failures == 0 ? 0 : 1;
}
