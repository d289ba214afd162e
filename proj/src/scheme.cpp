#include "hjnet/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hjnet {

namespace {

// Deterministic golden-section argmin of a unimodal function on [lo, hi].
template <class F>
double golden_argmin(F&& f, double lo, double hi, int iters = 80) {
    constexpr double invphi = 0.6180339887498949;
    double a = lo, b = hi;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && b - a > 1e-300; ++i) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

double quad_offset_of(const LagrangianSpec& spec, double x) {
    if (const auto* q = std::get_if<QuadraticCost>(&spec)) return q->c;
    const auto& qx = std::get<QuadraticXCost>(spec);
    double v = 0.0;
    for (auto it = qx.coeffs.rbegin(); it != qx.coeffs.rend(); ++it) v = v * x + *it;
    return v;
}

bool is_quadratic(const LagrangianSpec& spec) {
    return std::holds_alternative<QuadraticCost>(spec) || std::holds_alternative<QuadraticXCost>(spec);
}

// One trajectory leg on an arc: cost is evaluated at the fixed arc-local
// position x_eval, travel speed enters with the arc-local sign.
struct Leg {
    const LagrangianSpec* L = nullptr;
    double x_eval = 0.0;
    double sign = 1.0;
};

// t * L(x, sign * D / t), the travel cost of covering distance D in time t.
double leg_cost(const Leg& leg, double D, double t) {
    if (t <= 0.0) return D <= 0.0 ? 0.0 : kInf;
    return t * lagrangian_eval(*leg.L, leg.x_eval, leg.sign * (D / t));
}

double stay_cost(double s0, double Lbar0) {
    if (s0 <= 0.0) return 0.0;
    return s0 * Lbar0; // +inf when staying is forbidden (A = -inf)
}

// Stationary time of  q*(T - t) + leg_cost(leg, D, t)  in t, when closed-form.
std::optional<double> leg_stationary_time(const Leg& leg, double D, double q) {
    if (D <= 0.0 || !std::isfinite(q)) return std::nullopt;
    if (is_quadratic(*leg.L)) {
        double c = quad_offset_of(*leg.L, leg.x_eval);
        if (c > q) return D / std::sqrt(2.0 * (c - q));
        return std::nullopt;
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(leg.L)) {
        double l = f->lambda;
        if (l - 4.0 * q > 0.0) return D * std::sqrt(l / (l - 4.0 * q));
        return std::nullopt;
    }
    return std::nullopt; // tabulated legs use their breakpoint times instead
}

// Times at which a tabulated leg's cost kinks: t = D / |alpha_b|.
void leg_kink_times(const Leg& leg, double D, std::vector<double>& out) {
    if (D <= 0.0) return;
    if (const auto* tab = std::get_if<TabulatedCost>(leg.L)) {
        for (double ab : tab->alphas) {
            double w = leg.sign * ab; // speed when the arc-local velocity hits the breakpoint
            if (w > 0.0) out.push_back(D / w);
        }
    }
}

// Stationary speeds of  b*w + L(x, sign*w)  over w > 0 (rate of approaching
// along an interpolant of slope b).
void rate_stationary_speeds(const LagrangianSpec& L, double x, double sign, double b,
                            std::vector<double>& out) {
    (void)x;
    if (is_quadratic(L)) {
        if (-b > 0.0) out.push_back(-b);
        return;
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(&L)) {
        double w = -2.0 * b / f->lambda - 1.0;
        if (w > 0.0) out.push_back(w);
        return;
    }
    const auto& tab = std::get<TabulatedCost>(L);
    for (double ab : tab.alphas) {
        double w = sign * ab;
        if (w > 0.0) out.push_back(w);
    }
}

// Stationary velocities of  b*a + L(x, a)  (branch-1 foot stationarity).
void foot_stationary_velocities(const LagrangianSpec& L, double x, double b,
                                std::vector<double>& out) {
    (void)x;
    if (is_quadratic(L)) {
        out.push_back(b);
        return;
    }
    if (const auto* f = std::get_if<FluxCapacityCost>(&L)) {
        double ap = 2.0 * b / f->lambda - 1.0;
        double am = 2.0 * b / f->lambda + 1.0;
        if (ap > 0.0) out.push_back(ap);
        if (am < 0.0) out.push_back(am);
        out.push_back(0.0);
        return;
    }
    const auto& tab = std::get<TabulatedCost>(L);
    out.insert(out.end(), tab.alphas.begin(), tab.alphas.end());
}

struct InnerArrival {
    double value = kInf;
    double t_j = 0.0;
};

// min over t in [D/cap, B] of  leg_cost(leg, D, t) + (B - t) * Lbar0.
InnerArrival inner_arrival(const Leg& leg, double D, double B, double Lbar0, double cap) {
    InnerArrival best;
    if (D <= 0.0) {
        best.value = stay_cost(B, Lbar0);
        best.t_j = 0.0;
        return best;
    }
    double t_lo = D / cap;
    if (t_lo > B) return best;
    auto eval = [&](double t) {
        t = std::clamp(t, t_lo, B);
        double val = leg_cost(leg, D, t) + stay_cost(B - t, Lbar0);
        if (val < best.value) {
            best.value = val;
            best.t_j = t;
        }
    };
    if (!std::isfinite(Lbar0)) {
        eval(B);
        return best;
    }
    eval(t_lo);
    eval(B);
    if (auto t = leg_stationary_time(leg, D, Lbar0)) eval(*t);
    std::vector<double> kinks;
    leg_kink_times(leg, D, kinks);
    for (double t : kinks)
        if (t >= t_lo && t <= B) eval(t);
    return best;
}

} // namespace

double control_bound(const Network& net, double grad_bound, double A) {
    (void)A; // the junction control is 0; the limiter never enlarges the bound
    double mu = 0.0;
    for (const Arc& a : net.arcs()) mu = std::max(mu, alpha_bound_for_gradient(a.lagrangian, grad_bound));
    return mu;
}

struct SemiLagrangian::Candidate {
    double value = kInf;
    int rank = -1;
    UpdateWitness w;

    // Lower ranks are preferred on ties within tol; the scan being
    // rank-ordered, a later candidate must win by more than tol.
    void consider(double val, int r, const UpdateWitness& wit, double tol) {
        if (!(val < kInf)) return;
        double margin = (rank >= 0 && r > rank) ? tol : 0.0;
        if (val < value - margin) {
            value = val;
            rank = r;
            w = wit;
            w.value = val;
        }
    }
};

SemiLagrangian::SemiLagrangian(const Network& net, const Grid& grid, SchemeParams params)
    : net_(&net), grid_(&grid), params_(params) {
    if (std::abs(grid.dx() - params_.dx) > 1e-12 * std::max(1.0, params_.dx))
        throw std::invalid_argument("scheme params dx does not match the grid");
    if (!(params_.dt > 0.0) || !(params_.T > 0.0) || !(params_.mu > 0.0))
        throw std::invalid_argument("scheme params need positive dt, T, mu");
    if (params_.n_alpha == 1)
        throw std::invalid_argument("n_alpha sampling needs at least 2 points (or 0 for exact)");
    if (params_.mu * params_.dt > net.min_arc_length() * (1.0 + 1e-12))
        throw std::invalid_argument(
            "one-node-per-step rule violated: mu*dt exceeds the shortest arc length");
}

void SemiLagrangian::branch_one(const GridFunction& v, int arc, int k, Candidate& best) const {
    const Arc& a = net_->arc(arc);
    const double dx = grid_->dx();
    const double dt = params_.dt;
    const int n = grid_->cells(arc);
    const double len = n * dx;
    const double s = k * dx;
    const double cap = std::min(params_.mu, speed_cap(a.lagrangian));
    const int from = net_->from_index(arc);
    const int to = net_->to_index(arc);
    const bool from_junction = net_->node(from).kind == NodeKind::junction;
    const bool to_junction = net_->node(to).kind == NodeKind::junction;

    double ylo = 0.0, yhi = len;
    if (!from_junction && net_->node(from).bc->kind == BcKind::neumann && v.has_ghost(from))
        ylo = -dx;
    if (!to_junction && net_->node(to).bc->kind == BcKind::neumann && v.has_ghost(to)) yhi = len + dx;
    ylo = std::max(ylo, s - cap * dt);
    yhi = std::min(yhi, s + cap * dt);
    if (ylo > yhi) return;

    auto end_value = [&](int idx) -> double {
        if (idx < 0) return v.ghost(from);
        if (idx > n) return v.ghost(to);
        return v.at(arc, idx);
    };

    int c_lo = static_cast<int>(std::floor(ylo / dx + 1e-12));
    int c_hi = static_cast<int>(std::ceil(yhi / dx - 1e-12)) - 1;
    c_lo = std::max(c_lo, -1);
    c_hi = std::min(c_hi, n);
    std::vector<double> alphas;
    for (int c = c_lo; c <= c_hi; ++c) {
        double ya = std::max(ylo, c * dx);
        double yb = std::min(yhi, (c + 1) * dx);
        if (ya > yb) continue;
        double V0 = end_value(c);
        double V1 = end_value(c + 1);
        double b = (V1 - V0) / dx;

        alphas.clear();
        if (params_.n_alpha > 0) {
            for (int i = 0; i < params_.n_alpha; ++i)
                alphas.push_back(-cap + 2.0 * cap * i / (params_.n_alpha - 1));
        } else {
            foot_stationary_velocities(a.lagrangian, s, b, alphas);
        }

        auto eval_foot = [&](double y) {
            if (y < ya || y > yb) return;
            if (y == 0.0 && from_junction) return; // handled by the crossing branch
            if (y == len && to_junction) return;
            double al = (s - y) / dt;
            double iv = V0 + ((y - c * dx) / dx) * (V1 - V0);
            double val = iv + dt * lagrangian_eval(a.lagrangian, s, al);
            UpdateWitness wit;
            wit.branch = UpdateBranch::stay;
            wit.alpha_i = al;
            wit.foot = y;
            best.consider(val, 0, wit, params_.tol);
        };
        eval_foot(ya);
        eval_foot(yb);
        for (double al : alphas) eval_foot(s - al * dt);
        if (params_.n_alpha > 0) {
            // local refinement of the sampled minimum inside this cell
            double y_ref = golden_argmin(
                [&](double y) {
                    double al = (s - y) / dt;
                    return V0 + ((y - c * dx) / dx) * (V1 - V0) +
                           dt * lagrangian_eval(a.lagrangian, s, al);
                },
                ya, yb, 40);
            eval_foot(y_ref);
        }
    }
}

void SemiLagrangian::node_families(const GridFunction& v, int node_idx, int home_arc, double s_dep,
                                   double d, Candidate& best) const {
    const double dx = grid_->dx();
    const double dt = params_.dt;
    const Node& nd = net_->node(node_idx);
    const double Lbar0 = -nd.flux_limiter;
    const int node_sample = grid_->node_sample(node_idx);

    Leg home;
    double tau_lo = 0.0, tau_hi = 0.0; // home-leg time window; both 0 for a node update
    std::vector<double> home_kinks;
    if (home_arc >= 0) {
        const Arc& a = net_->arc(home_arc);
        bool at_from = net_->from_index(home_arc) == node_idx;
        home = {&a.lagrangian, s_dep, at_from ? 1.0 : -1.0};
        double cap_a = std::min(params_.mu, speed_cap(a.lagrangian));
        tau_lo = d / cap_a;
        tau_hi = dt;
        if (tau_lo > tau_hi) return; // node out of reach within one step
        leg_kink_times(home, d, home_kinks);
    }

    // Minimize cost(tau) over [lo, hi]; cost must be unimodal there.
    auto minimize_tau = [&](auto&& cost, double lo, double hi, double q_tail,
                            auto&& on_best) {
        if (home_arc < 0) {
            on_best(0.0, cost(0.0));
            return;
        }
        if (lo > hi) return;
        double vbest = kInf, tbest = lo;
        auto eval = [&](double tau) {
            if (tau < lo || tau > hi) return;
            double val = cost(tau);
            if (val < vbest) {
                vbest = val;
                tbest = tau;
            }
        };
        eval(lo);
        eval(hi);
        if (auto t = leg_stationary_time(home, d, q_tail)) eval(*t);
        if (std::isfinite(Lbar0))
            if (auto t = leg_stationary_time(home, d, Lbar0)) eval(*t);
        for (double t : home_kinks) eval(t);
        eval(golden_argmin(cost, lo, hi));
        if (vbest < kInf) on_best(tbest, vbest);
    };

    int rank = 1; // after the stay branch; bumped per family so ties stay deterministic

    // Reach the node and stop there (arrival time t_j = 0).
    {
        auto cost = [&](double tau) {
            return v[node_sample] + stay_cost(dt - tau, Lbar0) + leg_cost(home, d, tau);
        };
        minimize_tau(cost, std::max(tau_lo, 0.0), tau_hi, Lbar0, [&](double tau, double val) {
            UpdateWitness wit;
            wit.branch = UpdateBranch::cross;
            wit.node = node_idx;
            wit.arc_j = -1;
            wit.alpha_j = 0.0;
            wit.tau = tau;
            wit.s0 = dt - tau;
            wit.alpha_i = tau > 0.0 ? d / tau : 0.0;
            wit.foot = 0.0;
            best.consider(val, rank, wit, params_.tol);
        });
    }
    ++rank;

    // Arrivals from each incident arc, lowest arc index first.
    std::vector<IncidentArc> arcs = net_->incident(node_idx);
    std::sort(arcs.begin(), arcs.end(),
              [](const IncidentArc& l, const IncidentArc& r) { return l.arc < r.arc; });
    for (const auto& inc : arcs) {
        const Arc& aj = net_->arc(inc.arc);
        const int nj = grid_->cells(inc.arc);
        const double sign_j = inc.at_from ? -1.0 : 1.0;
        const double x_node = inc.at_from ? 0.0 : aj.length;
        const double cap_j = std::min(params_.mu, speed_cap(aj.lagrangian));
        Leg arrive{&aj.lagrangian, x_node, sign_j};
        auto sample_value = [&](int m) { return v.at(inc.arc, inc.at_from ? m : nj - m); };
        int Mmax = std::min(nj, static_cast<int>(std::floor(cap_j * dt / dx + 1e-12)));

        // dwell at the node on arc j with zero velocity: the arrival cost rate
        // L_j(node, 0) competes with the staying cost of the node itself
        {
            double dwell = lagrangian_eval(aj.lagrangian, x_node, 0.0);
            double q = std::min(dwell, Lbar0);
            auto cost = [&](double tau) {
                return v[node_sample] + (dt - tau) * q + leg_cost(home, d, tau);
            };
            if (std::isfinite(q)) {
                minimize_tau(cost, std::max(tau_lo, 0.0), tau_hi, q, [&](double tau, double val) {
                    UpdateWitness wit;
                    wit.branch = UpdateBranch::cross;
                    wit.node = node_idx;
                    wit.arc_j = inc.arc;
                    wit.alpha_j = 0.0;
                    wit.tau = tau;
                    wit.s0 = dwell <= Lbar0 ? 0.0 : dt - tau;
                    wit.alpha_i = tau > 0.0 ? d / tau : 0.0;
                    wit.foot = 0.0;
                    best.consider(val, rank, wit, params_.tol);
                });
            }
        }

        // foot pinned at inward sample m
        for (int m = 1; m <= Mmax; ++m) {
            double D = m * dx;
            double vm = sample_value(m);
            auto cost = [&](double tau) {
                return vm + inner_arrival(arrive, D, dt - tau, Lbar0, cap_j).value +
                       leg_cost(home, d, tau);
            };
            double hi = dt - D / cap_j;
            minimize_tau(cost, std::max(tau_lo, 0.0), std::min(tau_hi, hi), Lbar0,
                         [&](double tau, double val) {
                             InnerArrival in = inner_arrival(arrive, D, dt - tau, Lbar0, cap_j);
                             UpdateWitness wit;
                             wit.branch = UpdateBranch::cross;
                             wit.node = node_idx;
                             wit.arc_j = inc.arc;
                             wit.alpha_j = in.t_j > 0.0 ? sign_j * D / in.t_j : 0.0;
                             wit.tau = tau;
                             wit.s0 = dt - tau - in.t_j;
                             wit.alpha_i = tau > 0.0 ? d / tau : 0.0;
                             wit.foot = D;
                             best.consider(val, rank, wit, params_.tol);
                         });
        }

        // foot stationary inside inward cell c at approach speed w
        std::vector<double> speeds;
        for (int c = 0; c < Mmax; ++c) {
            double V0 = sample_value(c);
            double V1 = sample_value(c + 1);
            double b = (V1 - V0) / dx;
            double a_int = V0 - b * (c * dx);
            speeds.clear();
            if (params_.n_alpha > 0) {
                for (int i = 1; i <= params_.n_alpha; ++i)
                    speeds.push_back(cap_j * i / params_.n_alpha);
            } else {
                rate_stationary_speeds(aj.lagrangian, x_node, sign_j, b, speeds);
                speeds.push_back(cap_j); // constrained optimum when the stationary speed exceeds the cap
            }
            for (double w : speeds) {
                if (!(w > 0.0) || w > cap_j) continue;
                double rate = b * w + lagrangian_eval(aj.lagrangian, x_node, sign_j * w);
                double tv_lo = c * dx / w;
                double tv_hi = (c + 1) * dx / w;
                auto inner = [&](double B) -> InnerArrival {
                    InnerArrival r;
                    if (tv_lo > B) return r;
                    double t;
                    if (!std::isfinite(Lbar0)) {
                        if (B > tv_hi) return r;
                        t = B;
                    } else {
                        t = (rate <= Lbar0) ? std::min(tv_hi, B) : tv_lo;
                    }
                    r.t_j = t;
                    r.value = t * rate + stay_cost(B - t, Lbar0);
                    return r;
                };
                auto cost = [&](double tau) {
                    return a_int + inner(dt - tau).value + leg_cost(home, d, tau);
                };
                double lo = std::max(tau_lo, 0.0);
                if (!std::isfinite(Lbar0)) lo = std::max(lo, dt - tv_hi); // s0 = 0 pins the foot window
                minimize_tau(cost, lo, std::min(tau_hi, dt - tv_lo), rate,
                             [&](double tau, double val) {
                                 InnerArrival in = inner(dt - tau);
                                 UpdateWitness wit;
                                 wit.branch = UpdateBranch::cross;
                                 wit.node = node_idx;
                                 wit.arc_j = inc.arc;
                                 wit.alpha_j = sign_j * w;
                                 wit.tau = tau;
                                 wit.s0 = dt - tau - in.t_j;
                                 wit.alpha_i = tau > 0.0 ? d / tau : 0.0;
                                 wit.foot = w * in.t_j;
                                 best.consider(val, rank, wit, params_.tol);
                             });
            }
        }
        ++rank;
    }
}

void SemiLagrangian::branch_cross(const GridFunction& v, int arc, int k, int node_idx,
                                  Candidate& best) const {
    const double dx = grid_->dx();
    const int n = grid_->cells(arc);
    double s = k * dx;
    double d = (net_->from_index(arc) == node_idx) ? s : n * dx - s;
    node_families(v, node_idx, arc, s, d, best);
}

double SemiLagrangian::update_interior(const GridFunction& v, int arc, int k,
                                       UpdateWitness* w) const {
    const int n = grid_->cells(arc);
    const int from = net_->from_index(arc);
    const int to = net_->to_index(arc);
    if ((k == 0 && net_->node(from).kind == NodeKind::junction) ||
        (k == n && net_->node(to).kind == NodeKind::junction))
        throw std::logic_error("update_interior called on a junction sample");

    Candidate best;
    branch_one(v, arc, k, best);
    if (k > 0 && net_->node(from).kind == NodeKind::junction &&
        k * grid_->dx() <= params_.mu * params_.dt)
        branch_cross(v, arc, k, from, best);
    if (k < n && net_->node(to).kind == NodeKind::junction &&
        (n - k) * grid_->dx() <= params_.mu * params_.dt)
        branch_cross(v, arc, k, to, best);
    if (!(best.value < kInf))
        throw std::runtime_error("update_interior: no admissible control (arc " +
                                 std::to_string(net_->arc(arc).id) + ")");
    if (best.w.branch == UpdateBranch::cross) {
        // crossing witnesses must satisfy the branch predicate exactly
        if (best.w.tau > params_.dt * (1.0 + 1e-12))
            throw std::logic_error("crossing witness violates tau <= dt");
    }
    if (w) *w = best.w;
    return best.value;
}

double SemiLagrangian::update_junction(const GridFunction& v, int node_idx,
                                       UpdateWitness* w) const {
    if (net_->node(node_idx).kind != NodeKind::junction)
        throw std::logic_error("update_junction called on a non-junction node");
    Candidate best;
    // remain at the node for the whole step (s0 = dt)
    {
        double val = v[grid_->node_sample(node_idx)] + stay_cost(params_.dt, -net_->node(node_idx).flux_limiter);
        UpdateWitness wit;
        wit.branch = UpdateBranch::stay;
        wit.node = node_idx;
        wit.alpha_i = 0.0;
        wit.s0 = params_.dt;
        best.consider(val, 0, wit, params_.tol);
    }
    node_families(v, node_idx, -1, 0.0, 0.0, best);
    if (!(best.value < kInf))
        throw std::runtime_error("update_junction: no admissible control at node " +
                                 std::to_string(net_->node(node_idx).id));
    if (w) *w = best.w;
    return best.value;
}

void SemiLagrangian::set_ghosts(GridFunction& v, double t) const {
    for (std::size_t nidx = 0; nidx < net_->nodes().size(); ++nidx) {
        const Node& nd = net_->nodes()[nidx];
        if (nd.kind != NodeKind::boundary || nd.bc->kind != BcKind::neumann) continue;
        v.set_ghost(static_cast<int>(nidx),
                    v[grid_->node_sample(static_cast<int>(nidx))] + grid_->dx() * nd.bc->value(t));
    }
}

void SemiLagrangian::apply_boundary(GridFunction& v, double t) const {
    for (std::size_t nidx = 0; nidx < net_->nodes().size(); ++nidx) {
        const Node& nd = net_->nodes()[nidx];
        if (nd.kind != NodeKind::boundary) continue;
        if (nd.bc->kind == BcKind::dirichlet)
            v[grid_->node_sample(static_cast<int>(nidx))] = nd.bc->value(t);
    }
    set_ghosts(v, t);
}

GridFunction SemiLagrangian::step(const GridFunction& v, double t,
                                  std::vector<UpdateWitness>* witnesses) const {
    GridFunction out(*grid_, t + params_.dt);
    if (witnesses) witnesses->assign(static_cast<std::size_t>(grid_->num_samples()), {});
    UpdateWitness wit;
    for (std::size_t nidx = 0; nidx < net_->nodes().size(); ++nidx) {
        const Node& nd = net_->nodes()[nidx];
        int sample = grid_->node_sample(static_cast<int>(nidx));
        if (nd.kind == NodeKind::junction) {
            out[sample] = update_junction(v, static_cast<int>(nidx), &wit);
            if (witnesses) (*witnesses)[static_cast<std::size_t>(sample)] = wit;
        } else if (nd.bc->kind == BcKind::neumann) {
            const IncidentArc& inc = net_->incident(static_cast<int>(nidx)).front();
            int k = inc.at_from ? 0 : grid_->cells(inc.arc);
            out[sample] = update_interior(v, inc.arc, k, &wit);
            if (witnesses) (*witnesses)[static_cast<std::size_t>(sample)] = wit;
        }
        // dirichlet samples are pinned below
    }
    for (std::size_t a = 0; a < net_->arcs().size(); ++a)
        for (int k = 1; k < grid_->cells(static_cast<int>(a)); ++k) {
            int sample = grid_->sample_id(static_cast<int>(a), k);
            out[sample] = update_interior(v, static_cast<int>(a), k, &wit);
            if (witnesses) (*witnesses)[static_cast<std::size_t>(sample)] = wit;
        }
    apply_boundary(out, t + params_.dt);
    return out;
}

SolveResult SemiLagrangian::solve(const GridFunction& u0,
                                  const std::vector<double>& snapshot_times) const {
    // the certified control bound for the initial slope must fit under mu
    double p0 = u0.discrete_lipschitz();
    double need = control_bound(*net_, p0);
    if (params_.mu < need * (1.0 - 1e-12))
        throw std::invalid_argument("control bound mu = " + std::to_string(params_.mu) +
                                    " is below the certified bound " + std::to_string(need));

    int N = params_.num_steps();
    std::vector<int> snap_idx;
    for (double t : snapshot_times) {
        int idx = static_cast<int>(t / params_.dt + 1e-9); // snapshots round down to t_n
        snap_idx.push_back(std::clamp(idx, 0, N));
    }

    SolveResult res;
    GridFunction layer = u0;
    layer.set_time(0.0);
    set_ghosts(layer, 0.0);
    auto record = [&](int n) {
        for (int idx : snap_idx)
            if (idx == n) {
                res.snapshots.push_back(layer);
                break;
            }
    };
    record(0);
    std::vector<UpdateWitness> wits;
    for (int n = 0; n < N; ++n) {
        layer = step(layer, n * params_.dt, &wits);
        if (!layer.all_finite())
            throw std::runtime_error("solve: non-finite value after step " + std::to_string(n + 1));
        for (const auto& wit : wits) {
            double amax = std::max(std::abs(wit.alpha_i), std::abs(wit.alpha_j));
            res.max_abs_control = std::max(res.max_abs_control, amax);
            if (amax >= params_.mu * (1.0 - 1e-9)) res.control_clamp_hit = true;
        }
        record(n + 1);
    }
    res.final = layer;
    res.steps = N;
    return res;
}

} // namespace hjnet
