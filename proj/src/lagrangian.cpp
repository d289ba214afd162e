#include "hjnet/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace hjnet {

namespace {

double poly_eval(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

} // namespace

void validate(const LagrangianSpec& spec) {
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        if (!(f->lambda > 0.0) || f->lambda > 1.0)
            throw std::invalid_argument("flux-capacity lambda must lie in (0,1]");
        return;
    }
    if (const auto* t = std::get_if<TabulatedCost>(&spec)) {
        const auto& a = t->alphas;
        const auto& v = t->values;
        if (a.size() < 2 || a.size() != v.size())
            throw std::invalid_argument("tabulated cost needs >= 2 matching (alpha, value) samples");
        for (std::size_t k = 0; k + 1 < a.size(); ++k)
            if (!(a[k + 1] > a[k])) throw std::invalid_argument("tabulated alphas must be strictly increasing");
        for (double x : v)
            if (!std::isfinite(x)) throw std::invalid_argument("tabulated values must be finite");
        if (a.front() > 0.0 || a.back() < 0.0)
            throw std::invalid_argument("tabulated alphas must bracket zero velocity");
        // strict convexity: segment slopes strictly increasing
        double prev = -kInf;
        for (std::size_t k = 0; k + 1 < a.size(); ++k) {
            double s = (v[k + 1] - v[k]) / (a[k + 1] - a[k]);
            if (!(s > prev)) throw std::invalid_argument("tabulated cost is not strictly convex");
            prev = s;
        }
        return;
    }
    if (const auto* q = std::get_if<QuadraticCost>(&spec)) {
        if (!std::isfinite(q->c)) throw std::invalid_argument("quadratic offset must be finite");
        return;
    }
    const auto& qx = std::get<QuadraticXCost>(spec);
    if (qx.coeffs.empty()) throw std::invalid_argument("quadratic_x needs at least one coefficient");
    for (double c : qx.coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("quadratic_x coefficients must be finite");
}

double lagrangian_eval(const LagrangianSpec& spec, double x, double a) {
    if (const auto* q = std::get_if<QuadraticCost>(&spec)) return 0.5 * a * a + q->c;
    if (const auto* qx = std::get_if<QuadraticXCost>(&spec)) return 0.5 * a * a + poly_eval(qx->coeffs, x);
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        double t = std::abs(a) + 1.0;
        return 0.25 * f->lambda * t * t;
    }
    const auto& tab = std::get<TabulatedCost>(spec);
    const auto& as = tab.alphas;
    if (a < as.front() || a > as.back()) return kInf;
    auto it = std::upper_bound(as.begin(), as.end(), a);
    std::size_t k = (it == as.begin()) ? 0 : static_cast<std::size_t>(it - as.begin()) - 1;
    if (k + 1 >= as.size()) k = as.size() - 2;
    double t = (a - as[k]) / (as[k + 1] - as[k]);
    return tab.values[k] + t * (tab.values[k + 1] - tab.values[k]);
}

double lagrangian_min(const LagrangianSpec& spec, double x, double* argmin) {
    if (const auto* q = std::get_if<QuadraticCost>(&spec)) {
        if (argmin) *argmin = 0.0;
        return q->c;
    }
    if (const auto* qx = std::get_if<QuadraticXCost>(&spec)) {
        if (argmin) *argmin = 0.0;
        return poly_eval(qx->coeffs, x);
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec)) {
        if (argmin) *argmin = 0.0;
        return 0.25 * f->lambda;
    }
    const auto& tab = std::get<TabulatedCost>(spec);
    std::size_t k = static_cast<std::size_t>(
        std::min_element(tab.values.begin(), tab.values.end()) - tab.values.begin());
    if (argmin) *argmin = tab.alphas[k];
    return tab.values[k];
}

std::vector<double> lagrangian_breakpoints(const LagrangianSpec& spec) {
    if (std::holds_alternative<FluxCapacityCost>(spec)) return {0.0};
    if (const auto* t = std::get_if<TabulatedCost>(&spec)) return t->alphas;
    return {};
}

double alpha_bound_for_gradient(const LagrangianSpec& spec, double grad_bound) {
    double p = std::abs(grad_bound);
    if (std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec))
        return p; // argmax of a*p - a^2/2 is a = p
    if (const auto* f = std::get_if<FluxCapacityCost>(&spec))
        return 2.0 * p / f->lambda + 1.0; // subdifferential range of the conjugate
    const auto& tab = std::get<TabulatedCost>(spec);
    // compact support caps the control regardless of p
    (void)p;
    return std::max(std::abs(tab.alphas.front()), std::abs(tab.alphas.back()));
}

double speed_cap(const LagrangianSpec& spec) {
    if (const auto* t = std::get_if<TabulatedCost>(&spec))
        return std::max(std::abs(t->alphas.front()), std::abs(t->alphas.back()));
    return kInf;
}

std::string describe(const LagrangianSpec& spec) {
    std::ostringstream os;
    if (const auto* q = std::get_if<QuadraticCost>(&spec))
        os << "quadratic(c=" << q->c << ")";
    else if (std::holds_alternative<QuadraticXCost>(spec))
        os << "quadratic_x";
    else if (const auto* f = std::get_if<FluxCapacityCost>(&spec))
        os << "flux(lambda=" << f->lambda << ")";
    else
        os << "table(" << std::get<TabulatedCost>(spec).alphas.size() << " pts)";
    return os.str();
}

} // namespace hjnet
