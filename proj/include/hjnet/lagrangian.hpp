#ifndef HJNET_LAGRANGIAN_HPP
#define HJNET_LAGRANGIAN_HPP

#include <limits>
#include <string>
#include <variant>
#include <vector>

namespace hjnet {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Running cost L(x, a) on one arc; `a` is the signed velocity in the arc's
// own parameterization, `x` the arc-local position of evaluation.

// L(a) = a^2/2 + c
struct QuadraticCost {
    double c = 0.0;
};

// L(x, a) = a^2/2 + c(x), c a polynomial in the arc-local position.
struct QuadraticXCost {
    std::vector<double> coeffs; // c(x) = coeffs[0] + coeffs[1]*x + ...
};

// L(a) = (lambda/4) * (|a|+1)^2, the conjugate of the capacity-lambda
// fundamental-diagram Hamiltonian. lambda in (0,1].
struct FluxCapacityCost {
    double lambda = 1.0;
};

// Piecewise-linear convex cost from samples; +inf outside [alphas.front(),
// alphas.back()], which also caps the admissible speed on the arc.
struct TabulatedCost {
    std::vector<double> alphas;
    std::vector<double> values;
};

using LagrangianSpec = std::variant<QuadraticCost, QuadraticXCost, FluxCapacityCost, TabulatedCost>;

// Staying cost at a junction with flux limiter A: running a zero control
// there costs exactly -A per unit time.
struct JunctionCost {
    double A = -kInf;
    double staying_cost() const { return -A; }
};

// Throws std::invalid_argument on violated convexity/coercivity constraints.
void validate(const LagrangianSpec& spec);

// L(x, a); +inf where the cost is not defined (tabulated out of range).
double lagrangian_eval(const LagrangianSpec& spec, double x, double a);

// min over a of L(x, a), attained value and minimizer.
double lagrangian_min(const LagrangianSpec& spec, double x, double* argmin = nullptr);

// Velocities at which L(x,.) has a kink or the piecewise-linear table has a
// breakpoint; empty for smooth variants except the |a| kink of flux costs.
std::vector<double> lagrangian_breakpoints(const LagrangianSpec& spec);

// Certified bound on |argmax_a (a p - L(x,a))| over |p| <= grad_bound.
double alpha_bound_for_gradient(const LagrangianSpec& spec, double grad_bound);

// Largest admissible |a| (speed cap of the cost itself); +inf when the cost
// is finite everywhere.
double speed_cap(const LagrangianSpec& spec);

std::string describe(const LagrangianSpec& spec);

} // namespace hjnet

#endif
