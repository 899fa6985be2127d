#pragma once

#include <utility>
#include <vector>

namespace tdroute {

/// Square nonnegative cost matrix with a large sentinel M written into the
/// diagonal and forbidden entries; M exceeds n times the largest regular
/// cost so no optimal solution uses a sentinel unless the instance is
/// infeasible. Forbidden cells are tracked explicitly so the sentinel can be
/// recomputed after bulk cost edits.
class CostMatrix {
public:
    explicit CostMatrix(int n, double fill = 0.0);
    static CostMatrix from_rows(const std::vector<std::vector<double>>& rows);

    int size() const { return n_; }
    double& at(int i, int j) { return c_[static_cast<std::size_t>(i) * n_ + j]; }
    double at(int i, int j) const { return c_[static_cast<std::size_t>(i) * n_ + j]; }

    double sentinel() const { return sentinel_; }
    bool is_sentinel(double v) const { return v >= sentinel_; }
    bool is_forbidden(int i, int j) const { return banned_[static_cast<std::size_t>(i) * n_ + j]; }

    void forbid(int i, int j) {
        banned_[static_cast<std::size_t>(i) * n_ + j] = 1;
        at(i, j) = sentinel_;
    }
    void forbid_diagonal();

    // Recomputes the sentinel from the regular entries and rewrites the
    // forbidden cells. Call once after editing costs through at().
    void refresh_sentinel();

private:
    int n_;
    std::vector<double> c_;
    std::vector<char> banned_;
    double sentinel_;
};

struct AssignmentResult {
    bool feasible = false;
    std::vector<int> assignment; // column matched to each row
    double cost = 0.0;
};

// O(n^3) optimal linear assignment (shortest augmenting paths). Infeasible
// when every completion uses a sentinel entry.
AssignmentResult solve_assignment(const CostMatrix& c);

/// Branching constraints for the tour solver: forced arcs must form vertex
/// disjoint simple paths and may not collide with the forbidden set.
struct AtspConstraints {
    std::vector<std::pair<int, int>> forced;
    std::vector<std::pair<int, int>> forbidden;
};

struct AtspResult {
    bool feasible = false;
    std::vector<int> tour; // vertex order starting at 0, size n
    double cost = 0.0;
    long nodes = 0; // assignment relaxations solved
};

struct AtspOptions {
    // When set, the returned optimum is the lexicographically smallest
    // optimal tour; costs extra constrained re-solves, so the inner
    // branch-and-bound loop disables it.
    bool lexicographic = true;
};

// Assignment-relaxation branch-and-bound with subtour branching: children
// forbid one arc of the shortest subtour and force the previously scanned
// ones. Best-first on the relaxation value, ties by creation order.
AtspResult solve_atsp(const CostMatrix& c, const AtspConstraints& k = {},
                      const AtspOptions& opts = {});

} // namespace tdroute
