#pragma once

#include "tdroute/tdgraph.hpp"

#include <map>
#include <vector>

namespace tdroute {

/// Maximal chain of departure/arrival times on one arc obtained by iterating
/// the arrival map forward and its inverse backward from a seed instant; all
/// elements lie in [0, T].
struct TimeSequence {
    Arc arc;
    std::vector<double> times;
};

/// Candidate breakpoint sets for the sought step cost function: one union of
/// time sequences per arc, and their global intersection.
struct OmegaSets {
    std::map<Arc, std::vector<double>> per_arc;
    std::vector<double> global;
};

// Forward arrival iteration from t up to T, then backward inverse-arrival
// iteration down to 0. Requires 0 <= t <= T.
TimeSequence time_sequence(const PwlFunction& tau, double T, double t, Arc arc = {0, 0});

// Seeds a time sequence at every travel time breakpoint of every arc and
// unions them per arc; the global set is the intersection of the per-arc
// sets with kEpsTime-tolerant matching, keeping the representative from the
// lexicographically first arc.
OmegaSets build_omega(const TdGraph& g);

// Sanity bound from the finiteness argument: |Omega_ij| never exceeds
// |A| * |T_breakpoints| * (T / tau_min).
bool size_bound_check(const TdGraph& g, const OmegaSets& omega);

} // namespace tdroute
