#ifndef HJNET_ANALYSIS_HPP
#define HJNET_ANALYSIS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hjnet/scenario.hpp"
#include "hjnet/scheme.hpp"

namespace hjnet {

// max over coarse samples of |w - ref| for an exact reference function.
double error_sup(const GridFunction& w, const std::function<double(ArcPoint)>& ref);

// Same against a fine-grid layer; the coarse samples must coincide with fine
// ones (commensurate spacings), restriction is exact.
double error_sup(const GridFunction& w, const GridFunction& fine);

// Exact steady state of the three-arc junction test: position is the planar
// embedding of the point, branch selected by which arc carries it.
// Arcs are indexed 1..3 in the order: (0,1)-(0,0), (0,0)-(1,-1), (0,0)-(-1,-1).
double exact_test2(int arc_number, Vec2 position);

struct ProbeResult {
    double value = 0.0;
    UpdateBranch branch = UpdateBranch::stay;
    double stay_form = 0.0;  // 1 + dx + (3/2) dt
    double cross_form = 0.0; // 1 + sqrt(3) dx + dt/2
};

// One application of the discrete operator on the two-arc counterexample
// junction at the first sample off the node, test data 1 - x.
ProbeResult consistency_probe(double dx, double dt);

// Ratio dt/dx at which the probe's winning branch switches, by bisection.
double probe_switch_ratio(double dx = 0.01, double tol = 1e-10);

struct ConvergenceReport {
    struct Row {
        double dx = 0.0;
        double dt = 0.0;
        double e_inf = 0.0;
    };
    std::vector<Row> rows;
    double order = 0.0;    // least-squares slope of log e_inf vs log dx
    double constant = 0.0; // exp(intercept), the fitted K of e ~ K dx^q
};

// Reference policy for a convergence study.
struct RefPolicy {
    std::function<double(ArcPoint)> exact; // set: compare to the exact function
    double fine_dx = 0.0;                  // else: self-reference run at (fine_dx, fine_dt)
    double fine_dt = 0.0;
};

ConvergenceReport convergence_study(const Scenario& sc, const std::vector<double>& resolutions,
                                    double ratio, double T, const RefPolicy& ref);

std::string report_csv(const ConvergenceReport& rep);

} // namespace hjnet

#endif
