#pragma once

#include "tdroute/assignment.hpp"
#include "tdroute/ctcp.hpp"
#include "tdroute/tdgraph.hpp"

#include <functional>
#include <iosfwd>
#include <map>
#include <vector>

namespace tdroute {

// Travel time whose accumulated cost under the step profile b equals c when
// departing at t: the unique d > 0 with \int_t^{t+d} b(mu) dmu = c.
// Well defined for every c > 0 because the last value of b persists.
double igp_travel_time(const StepFunction& b, double c, double t);

// Backward counterpart: departure time d with \int_d^{a} b(mu) dmu = c.
double igp_departure(const StepFunction& b, double c, double a);

// Exact piecewise linear materialization of t -> igp_travel_time(b, c, t) on
// [lo, hi]; breakpoints are the profile breakpoints and the departures whose
// arrival hits one.
PwlFunction materialize_igp(const StepFunction& b, double c, double lo, double hi);

/// The less congested auxiliary graph: per-arc constant costs c_ij and the
/// step profile b induce travel times tau_ij(t) = igp_travel_time(b, c_ij, t)
/// that never exceed the originals. Evaluated lazily; the branch-and-bound
/// queries scattered times and materializing fine grids would be wasted work.
struct LowerApproxGraph {
    const TdGraph* base = nullptr;
    StepFunction b = StepFunction::constant(1.0);
    std::map<Arc, double> c_underbar;

    double travel_time(int i, int j, double t) const {
        return igp_travel_time(b, c_underbar.at({i, j}), t);
    }
    // Duration of path p leaving at t on the auxiliary graph.
    double path_duration(const Path& p, double t) const;
};

// STEP 1 of the bounding procedure: fix b = y* and the per-arc constants to
// the minimum of the travel cost profile under y* over [0, T].
LowerApproxGraph lower_graph(const TdGraph& g, const CtcpResult& ctcp);

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
    std::vector<int> tour;
};

using AtspSolver = std::function<AtspResult(const CostMatrix&, const AtspConstraints&)>;

AtspSolver default_atsp_solver();

// STEPs 2-3: solve the time-invariant tour problem under the constant costs,
// evaluate the winning tour on the auxiliary graph (lower bound) and on the
// original graph (upper bound). lower <= OPT <= upper.
BoundPair bound_pair(const TdGraph& g, const LowerApproxGraph& la,
                     const AtspSolver& atsp_solve = default_atsp_solver());

// Builds a complete graph on n vertices whose arc travel times come from the
// IGP model with profile b and the given per-arc costs (ordered by (i, j)
// lexicographic, j != i). The result is a yes-instance of the constant
// traversal cost decision by construction; used as a test fixture generator.
TdGraph generate_invariant(int n, const StepFunction& b, const std::vector<double>& costs);

// Per-arc sampled comparison data (t, tau, tau_lower, cost under y*) as CSV.
void write_plot_csv(const TdGraph& g, const LowerApproxGraph& la, const CtcpResult& ctcp,
                    std::ostream& os, int samples_per_arc = 200);

} // namespace tdroute
