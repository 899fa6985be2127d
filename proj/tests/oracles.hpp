// Independent oracles for the test suite: quadrature, exhaustive
// enumeration, and random input generators. Nothing here may call into the
// implementation paths it is used to check.
#pragma once

#include "tdroute/pwl.hpp"
#include "tdroute/rng.hpp"
#include "tdroute/tdgraph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace oracles {

// Midpoint-rule integral of a step function; used to cross-check the closed
// form integration.
inline double quad_integral(const tdroute::StepFunction& b, double lo, double hi, int npts = 10000) {
    if (hi <= lo) return 0.0;
    double h = (hi - lo) / npts;
    double sum = 0.0;
    for (int i = 0; i < npts; ++i) sum += b.value(lo + (i + 0.5) * h);
    return sum * h;
}

// Best closed tour by evaluating every permutation with the duration
// recursion; the depot stays fixed at perm[0] = 0.
inline std::pair<double, std::vector<int>> brute_force_tsp(const tdroute::TdGraph& g) {
    const int n = g.num_vertices();
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> best_tour;
    do {
        std::vector<int> tour = {0};
        tour.insert(tour.end(), rest.begin(), rest.end());
        double d = tdroute::tour_duration(g, tour);
        if (d < best) {
            best = d;
            best_tour = tour;
        }
    } while (std::next_permutation(rest.begin(), rest.end()));
    return {best, best_tour};
}

// Minimum assignment cost over all permutations.
inline double brute_force_assignment(const std::vector<std::vector<double>>& c) {
    const int n = static_cast<int>(c.size());
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c[i][perm[i]];
        best = std::min(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

// Minimum ATSP tour cost over all permutations, with optional filters.
template <typename Filter>
double brute_force_atsp(const std::vector<std::vector<double>>& c, Filter&& keep) {
    const int n = static_cast<int>(c.size());
    std::vector<int> rest(n - 1);
    std::iota(rest.begin(), rest.end(), 1);
    double best = std::numeric_limits<double>::infinity();
    do {
        std::vector<int> tour = {0};
        tour.insert(tour.end(), rest.begin(), rest.end());
        if (!keep(tour)) continue;
        double s = 0.0;
        for (int i = 0; i < n; ++i) s += c[tour[i]][tour[(i + 1) % n]];
        best = std::min(best, s);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return best;
}

inline double brute_force_atsp(const std::vector<std::vector<double>>& c) {
    return brute_force_atsp(c, [](const std::vector<int>&) { return true; });
}

// Random FIFO travel time on [0, span] with values in [vmin, vmax].
inline tdroute::PwlFunction random_fifo(tdroute::SplitMix64& rng, double span, int max_bp = 6,
                                        double vmin = 0.5, double vmax = 4.0) {
    int k = rng.uniform_int(1, max_bp);
    std::vector<double> ts;
    for (int i = 0; i < k; ++i) ts.push_back(rng.uniform(0.0, span));
    ts = tdroute::merge_times(std::move(ts), 1e-3);
    std::vector<tdroute::PwlFunction::Breakpoint> pts;
    double v = rng.uniform(vmin, vmax);
    double prev_t = ts.front();
    for (double t : ts) {
        // Keep the segment slope above -0.9 so FIFO holds with margin.
        double lo = std::max(vmin, v - 0.9 * (t - prev_t));
        double hi = std::min(vmax, v + 2.0 * (t - prev_t) + 0.5);
        v = pts.empty() ? v : rng.uniform(lo, hi);
        pts.push_back({t, v});
        prev_t = t;
    }
    return tdroute::PwlFunction(pts);
}

inline tdroute::StepFunction random_step(tdroute::SplitMix64& rng, double span, int max_pieces = 6,
                                         double vmin = 0.5, double vmax = 3.0) {
    int k = rng.uniform_int(1, max_pieces);
    std::vector<double> ts = {0.0};
    for (int i = 1; i < k; ++i) ts.push_back(rng.uniform(0.0, span));
    ts = tdroute::merge_times(std::move(ts), 1e-3);
    std::vector<tdroute::StepFunction::Piece> ps;
    for (double t : ts) ps.push_back({t, rng.uniform(vmin, vmax)});
    return tdroute::StepFunction(ps);
}

// Complete random FIFO instance, small horizons, for brute-force testing.
inline tdroute::TdGraph random_complete(tdroute::SplitMix64& rng, int n, double span = 10.0) {
    tdroute::TdGraph g(n, span);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) g.add_arc(i, j, random_fifo(rng, span));
    return g;
}

// Every simple path with at least one arc, any endpoints.
inline std::vector<tdroute::Path> all_simple_paths(const tdroute::TdGraph& g) {
    std::vector<tdroute::Path> out;
    const int n = g.num_vertices();
    std::vector<int> cur;
    std::vector<char> used(n, 0);
    auto rec = [&](auto&& self, int v) -> void {
        cur.push_back(v);
        used[v] = 1;
        if (cur.size() >= 2) out.push_back(cur);
        for (int w = 0; w < n; ++w)
            if (!used[w] && g.has_arc(v, w)) self(self, w);
        used[v] = 0;
        cur.pop_back();
    };
    for (int v = 0; v < n; ++v) rec(rec, v);
    return out;
}

} // namespace oracles
