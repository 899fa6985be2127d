#pragma once

#include "tdroute/bounds.hpp"
#include "tdroute/ctcp.hpp"
#include "tdroute/tdgraph.hpp"

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace tdroute {

/// Search tree node: a fixed tour prefix starting at the depot plus a set of
/// forbidden arcs; lb is the inherited lower bound.
struct BnbNode {
    Path prefix = {0};
    std::vector<Arc> forbidden;
    double lb = 0.0;
    long id = 0;

    int depth() const { return static_cast<int>(prefix.size()) - 1; }
};

enum class SolveStatus { Optimal, Gap };

struct SolveReport {
    SolveStatus status = SolveStatus::Optimal;
    double optimum = 0.0; // equals ub_final when optimal
    std::vector<int> tour;
    long nodes = 0; // tour relaxations solved, root included
    double wall_seconds = 0.0;
    double lb_initial = 0.0;
    double ub_initial = 0.0;
    double lb_final = 0.0;
    double ub_final = 0.0;
    double gap_initial = 0.0; // (UB_I - LB_I) / LB_I
    double gap_final = 0.0;   // (UB_F - LB_F) / LB_F

    void write_kv(std::ostream& os, bool with_timing = true) const;
    // Columns: OPT, UB_I/LB_F, GAP_I, GAP_F, NODES, TIME (gaps in percent).
    static std::string csv_header();
    std::string csv_row(const std::string& instance, bool with_timing = true) const;
};

struct SolveConfig {
    GridPolicy grid = GridPolicy::reduced(75);
    std::optional<double> rho;
    double time_limit_seconds = std::numeric_limits<double>::infinity();
    // Test hook: records (lb, incumbent) after each processed node.
    std::vector<std::pair<double, double>>* trace = nullptr;
};

// Per-arc minimum of the travel cost profile over the clock window
// [t_lo, t_hi]; diagonal entries carry the sentinel.
CostMatrix node_costs(const CtcpResult& ctcp, int n, double t_lo, double t_hi);

// Children of a node given the relaxation tour (depot-rooted, open) and the
// tightness index k_prime: one child per deviation position k..k_prime
// (extend the prefix by c arcs, forbid the next one), plus, when
// k_prime < n, the child that extends the prefix through position k_prime
// with nothing forbidden. Together the children partition the node's
// completions.
std::vector<BnbNode> branch(const BnbNode& node, const std::vector<int>& relax_tour,
                            int k_prime, long& next_id);

// Exact TDTSP solver: LP-based root bounds, per-node cost refresh over the
// shrinking duration window, prefix-extension branching, best-first search.
SolveReport solve_tdtsp(const TdGraph& g, const SolveConfig& config = {});

} // namespace tdroute
