#include "hjnet/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hjnet {

namespace {

double quad_offset(const LagrangianSpec& spec, double x) {
    if (const auto* q = std::get_if<QuadraticCost>(&spec)) return q->c;
    const auto& qx = std::get<QuadraticXCost>(spec);
    double v = 0.0;
    for (auto it = qx.coeffs.rbegin(); it != qx.coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

} // namespace

double legendre(const LagrangianSpec& spec, double x, double p) {
    if (std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec))
        return 0.5 * p * p - quad_offset(spec, x);
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        double l = f->lambda;
        if (std::abs(p) <= 0.5 * l) return -0.25 * l; // flat bottom of the conjugate
        return p * p / l - std::abs(p);
    }
    const auto& tab = std::get<TabulatedCost>(spec);
    // a p - L(a) is piecewise linear in a, so the sup sits on a breakpoint.
    double best = -kInf;
    for (std::size_t k = 0; k < tab.alphas.size(); ++k)
        best = std::max(best, tab.alphas[k] * p - tab.values[k]);
    return best;
}

std::pair<double, double> p_hat_interval(const LagrangianSpec& spec, double x) {
    (void)x;
    if (std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec))
        return {0.0, 0.0};
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec))
        return {-0.5 * f->lambda, 0.5 * f->lambda};
    const auto& tab = std::get<TabulatedCost>(spec);
    // 0 is in dH(p_hat) iff p_hat is in dL(0): the argmin interval of H is the
    // subdifferential of L at zero velocity.
    const auto& a = tab.alphas;
    const auto& v = tab.values;
    auto slope = [&](std::size_t k) { return (v[k + 1] - v[k]) / (a[k + 1] - a[k]); };
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (a[k] == 0.0) {
            double lo = (k == 0) ? -kInf : slope(k - 1);
            double hi = (k + 1 == a.size()) ? kInf : slope(k);
            return {lo, hi};
        }
    }
    for (std::size_t k = 0; k + 1 < a.size(); ++k)
        if (a[k] < 0.0 && 0.0 < a[k + 1]) return {slope(k), slope(k)};
    throw std::invalid_argument("tabulated cost must bracket zero velocity");
}

double h_minus(const LagrangianSpec& spec, double x, double p) {
    auto [lo, hi] = p_hat_interval(spec, x);
    (void)hi;
    return legendre(spec, x, std::min(p, lo));
}

double h_plus(const LagrangianSpec& spec, double x, double p) {
    auto [lo, hi] = p_hat_interval(spec, x);
    (void)lo;
    return legendre(spec, x, std::max(p, hi));
}

double h_minus_conjugate(const LagrangianSpec& spec, double x, double p) {
    if (std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec)) {
        double a = std::min(p, 0.0);
        return a * p - (0.5 * a * a + quad_offset(spec, x));
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        double l = f->lambda;
        if (p > -0.5 * l) return -0.25 * l; // optimum clamped at a = 0
        return p * p / l + p;
    }
    const auto& tab = std::get<TabulatedCost>(spec);
    double best = -kInf;
    for (std::size_t k = 0; k < tab.alphas.size(); ++k) {
        if (tab.alphas[k] > 0.0) continue;
        best = std::max(best, tab.alphas[k] * p - tab.values[k]);
    }
    // a = 0 is always admissible for the constrained conjugate
    best = std::max(best, -lagrangian_eval(spec, x, 0.0));
    return best;
}

double h_plus_conjugate(const LagrangianSpec& spec, double x, double p) {
    if (std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec)) {
        double a = std::max(p, 0.0);
        return a * p - (0.5 * a * a + quad_offset(spec, x));
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        double l = f->lambda;
        if (p < 0.5 * l) return -0.25 * l;
        return p * p / l - p;
    }
    const auto& tab = std::get<TabulatedCost>(spec);
    double best = -kInf;
    for (std::size_t k = 0; k < tab.alphas.size(); ++k) {
        if (tab.alphas[k] < 0.0) continue;
        best = std::max(best, tab.alphas[k] * p - tab.values[k]);
    }
    best = std::max(best, -lagrangian_eval(spec, x, 0.0));
    return best;
}

double flux_limiter_F(double A, const std::vector<ArcGradient>& arcs) {
    if (arcs.empty()) throw std::invalid_argument("flux_limiter_F: no incident arcs");
    double m = A;
    for (const auto& g : arcs) m = std::max(m, h_minus(*g.spec, g.x_node, g.p));
    return m;
}

} // namespace hjnet
