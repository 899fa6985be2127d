#include "tdroute/tdgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tdroute {

TdGraph::TdGraph(int n, double horizon, double t0)
    : n_(n), horizon_(horizon), t0_(t0), arcs_(static_cast<std::size_t>(n) * n) {
    if (n < 1) throw std::invalid_argument("TdGraph: need at least one vertex");
    if (!(horizon > 0.0)) throw std::invalid_argument("TdGraph: horizon must be positive");
    if (t0 < 0.0 || t0 > horizon) throw std::invalid_argument("TdGraph: t0 outside [0, T]");
    required_vertices_.resize(n);
    std::iota(required_vertices_.begin(), required_vertices_.end(), 0);
}

void TdGraph::add_arc(int i, int j, PwlFunction tau) {
    if (i < 0 || i >= n_ || j < 0 || j >= n_)
        throw std::invalid_argument("TdGraph::add_arc: vertex out of range");
    if (i == j) throw std::invalid_argument("TdGraph::add_arc: self-loops are rejected");
    if (!tau.is_fifo())
        throw std::invalid_argument("TdGraph::add_arc: travel time for (" + std::to_string(i) +
                                    "," + std::to_string(j) + ") violates FIFO");
    auto& slot = arcs_[static_cast<std::size_t>(i) * n_ + j];
    if (!slot.has_value()) ++num_arcs_;
    slot = std::move(tau);
}

bool TdGraph::has_arc(int i, int j) const {
    if (i < 0 || i >= n_ || j < 0 || j >= n_ || i == j) return false;
    return arcs_[static_cast<std::size_t>(i) * n_ + j].has_value();
}

const PwlFunction& TdGraph::arc(int i, int j) const {
    if (!has_arc(i, j))
        throw std::invalid_argument("TdGraph::arc: missing arc (" + std::to_string(i) + "," +
                                    std::to_string(j) + ")");
    return *arcs_[static_cast<std::size_t>(i) * n_ + j];
}

std::vector<Arc> TdGraph::arcs() const {
    std::vector<Arc> out;
    out.reserve(num_arcs_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j)
            if (has_arc(i, j)) out.push_back({i, j});
    return out;
}

bool TdGraph::is_complete() const {
    return num_arcs_ == n_ * (n_ - 1);
}

bool TdGraph::is_connected() const {
    std::vector<int> parent(n_);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [i, j] : arcs()) parent[find(i)] = find(j);
    int root = find(0);
    for (int v = 1; v < n_; ++v)
        if (find(v) != root) return false;
    return true;
}

std::vector<double> TdGraph::all_breakpoints() const {
    std::vector<double> ts;
    for (const auto& [i, j] : arcs())
        for (const auto& p : arc(i, j).points())
            if (p.t >= -kEpsTime && p.t <= horizon_ + kEpsTime)
                ts.push_back(std::clamp(p.t, 0.0, horizon_));
    return merge_times(std::move(ts));
}

double TdGraph::min_travel_time() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& [i, j] : arcs()) m = std::min(m, arc(i, j).min_value());
    return m;
}

double path_duration(const TdGraph& g, const Path& p, double t) {
    double z = 0.0;
    for (std::size_t k = 1; k < p.size(); ++k)
        z += g.arc(p[k - 1], p[k]).value(t + z);
    return z;
}

namespace {

// Solves A(t) = s on a strictly increasing piecewise linear map given by
// sample times and values; returns nothing when s falls outside the sampled
// range.
std::optional<double> invert_samples(const std::vector<double>& ts,
                                     const std::vector<double>& vs, double s) {
    if (s < vs.front() - kEpsTime || s > vs.back() + kEpsTime) return std::nullopt;
    auto it = std::lower_bound(vs.begin(), vs.end(), s);
    std::size_t hi = static_cast<std::size_t>(it - vs.begin());
    if (hi == 0) return ts.front();
    if (hi == vs.size()) return ts.back();
    std::size_t lo = hi - 1;
    double w = (s - vs[lo]) / (vs[hi] - vs[lo]);
    return ts[lo] + w * (ts[hi] - ts[lo]);
}

} // namespace

PwlFunction duration_function(const TdGraph& g, const Path& p) {
    double T = g.horizon();
    // Composed arrival map sampled on a refining breakpoint grid; exact
    // because each refinement adds the preimages of the next arc's
    // breakpoints.
    std::vector<double> ts = {0.0, T};
    std::vector<double> vs = {0.0, T};
    for (std::size_t k = 1; k < p.size(); ++k) {
        const PwlFunction& tau = g.arc(p[k - 1], p[k]);
        std::vector<double> next_ts = ts;
        for (const auto& bp : tau.points())
            if (auto t = invert_samples(ts, vs, bp.t); t && *t > kEpsTime && *t < T - kEpsTime)
                next_ts.push_back(*t);
        next_ts = merge_times(std::move(next_ts));
        std::vector<double> next_vs(next_ts.size());
        for (std::size_t i = 0; i < next_ts.size(); ++i) {
            auto it = std::lower_bound(ts.begin(), ts.end(), next_ts[i]);
            double a;
            if (it != ts.end() && std::fabs(*it - next_ts[i]) <= kEpsTime) {
                a = vs[static_cast<std::size_t>(it - ts.begin())];
            } else {
                std::size_t hi = static_cast<std::size_t>(it - ts.begin());
                std::size_t lo = hi - 1;
                double w = (next_ts[i] - ts[lo]) / (ts[hi] - ts[lo]);
                a = vs[lo] + w * (vs[hi] - vs[lo]);
            }
            next_vs[i] = arrival(tau, a);
        }
        ts = std::move(next_ts);
        vs = std::move(next_vs);
    }
    std::vector<PwlFunction::Breakpoint> pts;
    pts.reserve(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) pts.push_back({ts[i], vs[i] - ts[i]});
    return PwlFunction(std::move(pts));
}

std::vector<double> dominance_grid(const TdGraph& g, const Path& p1, const Path& p2) {
    std::vector<double> grid = duration_function(g, p1).breakpoint_times();
    for (double t : duration_function(g, p2).breakpoint_times()) grid.push_back(t);
    grid = merge_times(std::move(grid));
    std::vector<double> out = grid;
    for (std::size_t i = 1; i < grid.size(); ++i) out.push_back(0.5 * (grid[i - 1] + grid[i]));
    return merge_times(std::move(out));
}

bool dominates(const TdGraph& g, const Path& p1, const Path& p2,
               const std::vector<double>& grid) {
    for (double t : grid)
        if (path_duration(g, p1, t) < path_duration(g, p2, t) - kEpsCost) return false;
    return true;
}

double tour_duration(const TdGraph& g, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.num_vertices())
        throw std::invalid_argument("tour_duration: not a permutation of V");
    std::vector<char> seen(g.num_vertices(), 0);
    for (int v : perm) {
        if (v < 0 || v >= g.num_vertices() || seen[v])
            throw std::invalid_argument("tour_duration: not a permutation of V");
        seen[v] = 1;
    }
    Path closed = perm;
    closed.push_back(perm.front());
    return path_duration(g, closed, g.start_time());
}

} // namespace tdroute
