#include "tdroute/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace tdroute {

namespace {

double sentinel_for(int n, double max_finite) {
    return (n + 1) * std::max(1.0, max_finite);
}

} // namespace

CostMatrix::CostMatrix(int n, double fill)
    : n_(n),
      c_(static_cast<std::size_t>(n) * n, fill),
      banned_(static_cast<std::size_t>(n) * n, 0),
      sentinel_(sentinel_for(n, fill)) {
    if (n < 1) throw std::invalid_argument("CostMatrix: empty matrix");
}

CostMatrix CostMatrix::from_rows(const std::vector<std::vector<double>>& rows) {
    CostMatrix m(static_cast<int>(rows.size()));
    for (int i = 0; i < m.n_; ++i) {
        if (rows[i].size() != rows.size())
            throw std::invalid_argument("CostMatrix: not square");
        for (int j = 0; j < m.n_; ++j) m.at(i, j) = rows[i][j];
    }
    m.refresh_sentinel();
    return m;
}

void CostMatrix::forbid_diagonal() {
    for (int i = 0; i < n_; ++i) forbid(i, i);
}

void CostMatrix::refresh_sentinel() {
    double max_regular = 0.0;
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (!banned_[k]) max_regular = std::max(max_regular, c_[k]);
    sentinel_ = sentinel_for(n_, max_regular);
    for (std::size_t k = 0; k < c_.size(); ++k)
        if (banned_[k]) c_[k] = sentinel_;
}

AssignmentResult solve_assignment(const CostMatrix& c) {
    const int n = c.size();
    // Shortest augmenting path formulation with potentials (1-based
    // scratch arrays, column 0 is the virtual root).
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<int> p(n + 1, 0), way(n + 1, 0);
    const double inf = std::numeric_limits<double>::infinity();

    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, 0);
        do {
            used[j0] = 1;
            int i0 = p[j0], j1 = 0;
            double delta = inf;
            for (int j = 1; j <= n; ++j) {
                if (used[j]) continue;
                double cur = c.at(i0 - 1, j - 1) - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }

    AssignmentResult res;
    res.assignment.assign(n, -1);
    for (int j = 1; j <= n; ++j)
        if (p[j]) res.assignment[p[j] - 1] = j - 1;
    res.cost = 0.0;
    res.feasible = true;
    for (int i = 0; i < n; ++i) {
        double v_ij = c.at(i, res.assignment[i]);
        if (c.is_sentinel(v_ij)) res.feasible = false;
        res.cost += v_ij;
    }
    return res;
}

namespace {

struct SearchNode {
    double bound;
    long id;
    std::vector<std::pair<int, int>> forced;
    std::vector<std::pair<int, int>> forbidden;
};

struct NodeOrder {
    bool operator()(const SearchNode& a, const SearchNode& b) const {
        if (a.bound != b.bound) return a.bound > b.bound;
        return a.id > b.id;
    }
};

// Forced arcs are enforced by forbidding every competing out-arc of the tail
// and in-arc of the head.
CostMatrix apply_constraints(const CostMatrix& base, const std::vector<std::pair<int, int>>& forced,
                             const std::vector<std::pair<int, int>>& forbidden) {
    CostMatrix m = base;
    m.forbid_diagonal();
    for (const auto& [i, j] : forbidden) m.forbid(i, j);
    for (const auto& [i, j] : forced) {
        for (int k = 0; k < m.size(); ++k) {
            if (k != j) m.forbid(i, k);
            if (k != i) m.forbid(k, j);
        }
    }
    return m;
}

bool constraints_consistent(int n, const AtspConstraints& k) {
    std::vector<int> out(n, -1), in(n, -1);
    for (const auto& [i, j] : k.forced) {
        if (i < 0 || i >= n || j < 0 || j >= n || i == j) return false;
        if (out[i] >= 0 || in[j] >= 0) return false;
        out[i] = j;
        in[j] = i;
    }
    // Forced arcs must form simple paths: no cycle shorter than n.
    for (const auto& [i, j] : k.forced) {
        int cur = j;
        int steps = 1;
        while (out[cur] >= 0 && steps <= n) {
            cur = out[cur];
            ++steps;
            if (cur == i && steps < n) return false;
        }
    }
    for (const auto& [i, j] : k.forbidden)
        for (const auto& [fi, fj] : k.forced)
            if (i == fi && j == fj) return false;
    return true;
}

// Cycles of the assignment permutation, each rotated to start at its
// smallest vertex, ordered by (length, smallest vertex).
std::vector<std::vector<int>> permutation_cycles(const std::vector<int>& next) {
    const int n = static_cast<int>(next.size());
    std::vector<char> seen(n, 0);
    std::vector<std::vector<int>> cycles;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        std::vector<int> cyc;
        int cur = s;
        while (!seen[cur]) {
            seen[cur] = 1;
            cyc.push_back(cur);
            cur = next[cur];
        }
        cycles.push_back(std::move(cyc));
    }
    std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a.front() < b.front();
    });
    return cycles;
}

std::vector<int> tour_from_cycle(const std::vector<int>& next) {
    std::vector<int> tour;
    int cur = 0;
    do {
        tour.push_back(cur);
        cur = next[cur];
    } while (cur != 0);
    return tour;
}

AtspResult search(const CostMatrix& base, const AtspConstraints& k) {
    AtspResult best;
    double ub = std::numeric_limits<double>::infinity();
    long next_id = 0;
    std::priority_queue<SearchNode, std::vector<SearchNode>, NodeOrder> open;
    open.push({0.0, next_id++, k.forced, k.forbidden});
    long nodes = 0;

    while (!open.empty()) {
        SearchNode node = open.top();
        open.pop();
        if (node.bound >= ub) continue;
        CostMatrix m = apply_constraints(base, node.forced, node.forbidden);
        AssignmentResult rel = solve_assignment(m);
        ++nodes;
        if (!rel.feasible || rel.cost >= ub) continue;
        auto cycles = permutation_cycles(rel.assignment);
        if (cycles.size() == 1) {
            ub = rel.cost;
            best.feasible = true;
            best.tour = tour_from_cycle(rel.assignment);
            best.cost = rel.cost;
            continue;
        }
        const std::vector<int>& sub = cycles.front();
        for (std::size_t a = 0; a < sub.size(); ++a) {
            SearchNode child;
            child.bound = rel.cost;
            child.id = next_id++;
            child.forced = node.forced;
            child.forbidden = node.forbidden;
            for (std::size_t b = 0; b < a; ++b)
                child.forced.push_back({sub[b], rel.assignment[sub[b]]});
            child.forbidden.push_back({sub[a], rel.assignment[sub[a]]});
            open.push(std::move(child));
        }
    }
    best.nodes = nodes;
    return best;
}

} // namespace

AtspResult solve_atsp(const CostMatrix& c, const AtspConstraints& k, const AtspOptions& opts) {
    const int n = c.size();
    if (!constraints_consistent(n, k)) return {};
    if (n == 1) return {true, {0}, 0.0, 0};

    AtspResult res = search(c, k);
    // A tour touching a sentinel entry costs at least the sentinel itself.
    if (res.feasible && res.cost >= c.sentinel()) res.feasible = false;
    if (!res.feasible || !opts.lexicographic) return res;

    // Canonical output: fix the tour greedily, keeping the optimum, so ties
    // resolve to the lexicographically smallest tour.
    const double tol = 1e-9 * std::max(1.0, std::fabs(res.cost));
    std::vector<int> prefix = {0};
    AtspConstraints fixed = k;
    long extra_nodes = res.nodes;
    for (int pos = 1; pos < n; ++pos) {
        for (int v = 0; v < n; ++v) {
            if (std::find(prefix.begin(), prefix.end(), v) != prefix.end()) continue;
            AtspConstraints trial = fixed;
            trial.forced.push_back({prefix.back(), v});
            if (!constraints_consistent(n, trial)) continue;
            AtspResult sub = search(c, trial);
            extra_nodes += sub.nodes;
            if (sub.feasible && sub.cost <= res.cost + tol) {
                fixed = trial;
                prefix.push_back(v);
                break;
            }
        }
        if (static_cast<int>(prefix.size()) != pos + 1) return res; // fall back
    }
    res.tour = prefix;
    res.nodes = extra_nodes;
    return res;
}

} // namespace tdroute
