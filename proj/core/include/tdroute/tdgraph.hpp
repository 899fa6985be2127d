#pragma once

#include "tdroute/pwl.hpp"

#include <optional>
#include <utility>
#include <vector>

namespace tdroute {

using Arc = std::pair<int, int>;
using Path = std::vector<int>;

/// Directed time-dependent graph: one FIFO travel time function per arc, a
/// planning horizon [0, T] and a departure time t0. Required vertex/arc sets
/// carry the general routing data model; solvers in this library only handle
/// the Hamiltonian specialization (V_R = V, A_R empty, complete arc map).
class TdGraph {
public:
    TdGraph(int n, double horizon, double t0 = 0.0);

    // Rejects self-loops and non-FIFO or non-positive travel times.
    void add_arc(int i, int j, PwlFunction tau);

    int num_vertices() const { return n_; }
    double horizon() const { return horizon_; }
    double start_time() const { return t0_; }

    bool has_arc(int i, int j) const;
    const PwlFunction& arc(int i, int j) const;

    std::vector<Arc> arcs() const;
    int num_arcs() const { return num_arcs_; }

    bool is_complete() const;
    // Weak connectivity over the union of arc endpoints.
    bool is_connected() const;

    // All travel time breakpoints of all arcs, clipped to [0, T], merged
    // within kEpsTime.
    std::vector<double> all_breakpoints() const;

    // Minimum travel time value over all arcs.
    double min_travel_time() const;

    const std::vector<int>& required_vertices() const { return required_vertices_; }
    const std::vector<Arc>& required_arcs() const { return required_arcs_; }
    void set_required_vertices(std::vector<int> vs) { required_vertices_ = std::move(vs); }
    void set_required_arcs(std::vector<Arc> as) { required_arcs_ = std::move(as); }

private:
    int n_;
    double horizon_;
    double t0_;
    int num_arcs_ = 0;
    std::vector<std::optional<PwlFunction>> arcs_; // n x n, row major
    std::vector<int> required_vertices_;
    std::vector<Arc> required_arcs_;
};

// Duration of path p leaving its first vertex at time t:
// z_k = z_{k-1} + tau_{k-1,k}(t + z_{k-1}), z_0 = 0. The empty and
// single-vertex paths have duration 0. Throws when an arc is missing.
double path_duration(const TdGraph& g, const Path& p, double t);

// The duration t -> path_duration(g, p, t) as an exact piecewise linear
// function on [0, T]; its breakpoints are the start times at which some
// prefix arrival crosses a travel time breakpoint of the next arc.
PwlFunction duration_function(const TdGraph& g, const Path& p);

// Path dominance: p1 dominates p2 iff z(p1, t) >= z(p2, t) at every grid
// point. The grid must cover [0, T] including the composite breakpoints of
// both duration functions; see duration_function.
bool dominates(const TdGraph& g, const Path& p1, const Path& p2,
               const std::vector<double>& grid);

// Grid for dominates(): merged breakpoints of both duration functions plus
// interval midpoints.
std::vector<double> dominance_grid(const TdGraph& g, const Path& p1, const Path& p2);

// Duration of the closed tour visiting perm in order and returning to
// perm[0], leaving at the graph's start time. perm must be a permutation of
// the vertices.
double tour_duration(const TdGraph& g, const std::vector<int>& perm);

} // namespace tdroute
