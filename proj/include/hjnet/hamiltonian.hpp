#ifndef HJNET_HAMILTONIAN_HPP
#define HJNET_HAMILTONIAN_HPP

#include <utility>
#include <vector>

#include "hjnet/lagrangian.hpp"

namespace hjnet {

// H(x,p) = sup_a (a p - L(x,a)). Closed form for quadratic and flux costs,
// exact breakpoint maximization for tabulated ones.
double legendre(const LagrangianSpec& spec, double x, double p);

// Argmin set of p -> H(x,p): a single point for strictly convex H, an
// interval for flat-bottomed ones (flux capacity). first <= second.
std::pair<double, double> p_hat_interval(const LagrangianSpec& spec, double x);

// Non-increasing / non-decreasing envelopes of H around its argmin.
double h_minus(const LagrangianSpec& spec, double x, double p);
double h_plus(const LagrangianSpec& spec, double x, double p);

// Constrained-conjugate route to the same envelopes, used as an independent
// cross-check in tests: sup over a<=0 (resp. a>=0) of a*p - L(x,a).
double h_minus_conjugate(const LagrangianSpec& spec, double x, double p);
double h_plus_conjugate(const LagrangianSpec& spec, double x, double p);

struct ArcGradient {
    const LagrangianSpec* spec; // cost of the incident arc
    double x_node;              // arc-local coordinate of the junction on it
    double p;                   // one-sided gradient into the arc
};

// F_A(p) = max(A, max_i H_i^-(node, p_i)). A = -inf acts as a pure max over
// the H^- terms. Throws on an empty arc list.
double flux_limiter_F(double A, const std::vector<ArcGradient>& arcs);

} // namespace hjnet

#endif
