#include "tdroute/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace tdroute {

double igp_travel_time(const StepFunction& b, double c, double t) {
    if (!(c > 0.0)) throw std::invalid_argument("igp_travel_time: cost must be positive");
    const auto& ps = b.pieces();
    const int n = static_cast<int>(ps.size());
    auto it = std::upper_bound(ps.begin(), ps.end(), t,
                               [](double x, const StepFunction::Piece& p) { return x < p.t; });
    int k = std::max(0, static_cast<int>(it - ps.begin()) - 1);
    double cur = t;
    double remaining = c;
    while (true) {
        double upper = (k + 1 < n) ? ps[k + 1].t : std::numeric_limits<double>::infinity();
        double span_cost = (upper - cur) * ps[k].v;
        if (remaining <= span_cost) return cur + remaining / ps[k].v - t;
        remaining -= span_cost;
        cur = upper;
        ++k;
    }
}

double igp_departure(const StepFunction& b, double c, double a) {
    if (!(c > 0.0)) throw std::invalid_argument("igp_departure: cost must be positive");
    const auto& ps = b.pieces();
    auto it = std::upper_bound(ps.begin(), ps.end(), a,
                               [](double x, const StepFunction::Piece& p) { return x < p.t; });
    int k = std::max(0, static_cast<int>(it - ps.begin()) - 1);
    double cur = a;
    double remaining = c;
    while (true) {
        // Piece k's value holds on (lower, cur]; the first value extends to
        // -infinity, which guarantees termination.
        double lower = (k >= 1) ? ps[k].t : -std::numeric_limits<double>::infinity();
        double span_cost = (cur - lower) * ps[k].v;
        if (remaining <= span_cost) return cur - remaining / ps[k].v;
        remaining -= span_cost;
        cur = lower;
        --k;
    }
}

PwlFunction materialize_igp(const StepFunction& b, double c, double lo, double hi) {
    if (!(hi > lo)) throw std::invalid_argument("materialize_igp: empty interval");
    std::vector<double> ts = {lo, hi};
    for (const auto& p : b.pieces()) {
        if (p.t > lo && p.t < hi) ts.push_back(p.t);
        double d = igp_departure(b, c, p.t);
        if (d > lo && d < hi) ts.push_back(d);
    }
    ts = merge_times(std::move(ts));
    std::vector<PwlFunction::Breakpoint> pts;
    pts.reserve(ts.size());
    for (double t : ts) pts.push_back({t, igp_travel_time(b, c, t)});
    return PwlFunction(std::move(pts)).simplified();
}

double LowerApproxGraph::path_duration(const Path& p, double t) const {
    double z = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k)
        z += travel_time(p[k - 1], p[k], t + z);
    return z;
}

LowerApproxGraph lower_graph(const TdGraph& g, const CtcpResult& ctcp) {
    if (!ctcp.y_star.has_value())
        throw std::invalid_argument("lower_graph: CTCP result carries no step function");
    LowerApproxGraph la;
    la.base = &g;
    la.b = *ctcp.y_star;
    // Minimum of the exact cost profile over [0, T]; piecewise linear, so
    // the breakpoint values suffice.
    for (const auto& [arc, profile] : ctcp.cost_funcs) la.c_underbar[arc] = profile.min_value();
    return la;
}

AtspSolver default_atsp_solver() {
    return [](const CostMatrix& c, const AtspConstraints& k) {
        return solve_atsp(c, k, AtspOptions{.lexicographic = false});
    };
}

BoundPair bound_pair(const TdGraph& g, const LowerApproxGraph& la, const AtspSolver& atsp_solve) {
    const int n = g.num_vertices();
    CostMatrix costs(n);
    for (const auto& [arc, c] : la.c_underbar) costs.at(arc.first, arc.second) = c;
    costs.refresh_sentinel();
    costs.forbid_diagonal();
    AtspResult r = atsp_solve(costs, {});
    if (!r.feasible) throw std::runtime_error("bound_pair: tour subproblem infeasible");

    BoundPair bp;
    bp.tour = r.tour;
    Path closed = r.tour;
    closed.push_back(r.tour.front());
    bp.lower = la.path_duration(closed, g.start_time());
    bp.upper = tour_duration(g, r.tour);
    return bp;
}

TdGraph generate_invariant(int n, const StepFunction& b, const std::vector<double>& costs) {
    const std::size_t num_arcs = static_cast<std::size_t>(n) * (n - 1);
    if (costs.size() != num_arcs)
        throw std::invalid_argument("generate_invariant: need one cost per ordered pair");
    double horizon = std::max(b.pieces().back().t, 1.0);
    TdGraph g(n, horizon);
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!(costs[idx] > 0.0))
                throw std::invalid_argument("generate_invariant: costs must be positive");
            g.add_arc(i, j, materialize_igp(b, costs[idx], 0.0, horizon));
            ++idx;
        }
    }
    return g;
}

void write_plot_csv(const TdGraph& g, const LowerApproxGraph& la, const CtcpResult& ctcp,
                    std::ostream& os, int samples_per_arc) {
    os << "i,j,t,tau,tau_lower,cost\n";
    for (const auto& [arc, c] : la.c_underbar) {
        const PwlFunction& tau = g.arc(arc.first, arc.second);
        for (int s = 0; s <= samples_per_arc; ++s) {
            double t = g.horizon() * s / samples_per_arc;
            os << arc.first << "," << arc.second << "," << t << "," << tau.value(t) << ","
               << igp_travel_time(la.b, c, t) << "," << travel_cost(tau, *ctcp.y_star, t) << "\n";
        }
    }
}

} // namespace tdroute
