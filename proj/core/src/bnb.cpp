#include "tdroute/bnb.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace tdroute {

void SolveReport::write_kv(std::ostream& os, bool with_timing) const {
    os << "status=" << (status == SolveStatus::Optimal ? "optimal" : "gap") << "\n";
    if (status == SolveStatus::Optimal) os << "optimum=" << optimum << "\n";
    os << "lb_initial=" << lb_initial << "\n";
    os << "ub_initial=" << ub_initial << "\n";
    os << "lb_final=" << lb_final << "\n";
    os << "ub_final=" << ub_final << "\n";
    os << "gap_initial=" << gap_initial << "\n";
    os << "gap_final=" << gap_final << "\n";
    os << "nodes=" << nodes << "\n";
    if (with_timing) os << "time_s=" << wall_seconds << "\n";
    os << "tour=";
    for (std::size_t i = 0; i < tour.size(); ++i) os << (i ? " " : "") << tour[i];
    os << "\n";
}

std::string SolveReport::csv_header() {
    return "instance,OPT,UB_I/LB_F,GAP_I,GAP_F,NODES,TIME";
}

std::string SolveReport::csv_row(const std::string& instance, bool with_timing) const {
    std::ostringstream ss;
    ss << instance << "," << (status == SolveStatus::Optimal ? 1 : 0) << ","
       << (lb_final > 0.0 ? ub_initial / lb_final : 0.0) << "," << 100.0 * gap_initial << ","
       << 100.0 * gap_final << "," << nodes << ",";
    if (with_timing)
        ss << wall_seconds;
    else
        ss << "-";
    return ss.str();
}

CostMatrix node_costs(const CtcpResult& ctcp, int n, double t_lo, double t_hi) {
    if (!(t_lo <= t_hi)) throw std::invalid_argument("node_costs: empty window");
    CostMatrix m(n);
    for (const auto& [arc, profile] : ctcp.cost_funcs)
        m.at(arc.first, arc.second) = profile.min_on(t_lo, t_hi);
    m.refresh_sentinel();
    m.forbid_diagonal();
    return m;
}

std::vector<BnbNode> branch(const BnbNode& node, const std::vector<int>& relax_tour,
                            int k_prime, long& next_id) {
    const int k = node.depth();
    const int n = static_cast<int>(relax_tour.size());
    if (k_prime <= k || k_prime >= n)
        throw std::invalid_argument("branch: k_prime out of range");
    auto tour_vertex = [&](int pos) { return relax_tour[pos % n]; };

    std::vector<BnbNode> children;
    // Deviation children: follow the relaxation tour for c more arcs, then
    // forbid the next one.
    for (int c = 0; c <= k_prime - k; ++c) {
        BnbNode child;
        child.prefix = node.prefix;
        for (int j = 0; j < c; ++j) child.prefix.push_back(tour_vertex(k + 1 + j));
        child.forbidden = node.forbidden;
        child.forbidden.push_back({tour_vertex(k + c), tour_vertex(k + c + 1)});
        child.lb = node.lb;
        child.id = next_id++;
        children.push_back(std::move(child));
    }
    // Completions that follow the tour through position k_prime; when the
    // extension would close the cycle the only such completion is the
    // relaxation tour itself, which the node already evaluated.
    if (k_prime + 1 < n) {
        BnbNode child;
        child.prefix = node.prefix;
        for (int j = k + 1; j <= k_prime + 1; ++j) child.prefix.push_back(tour_vertex(j));
        child.forbidden = node.forbidden;
        child.lb = node.lb;
        child.id = next_id++;
        children.push_back(std::move(child));
    }
    return children;
}

namespace {

struct OpenOrder {
    bool operator()(const BnbNode& a, const BnbNode& b) const {
        if (a.lb != b.lb) return a.lb > b.lb;
        return a.id > b.id;
    }
};

double duration_under_costs(const TdGraph& g, const LowerApproxGraph& la, const CostMatrix& costs,
                            const std::vector<int>& tour, int upto, double prefix_true,
                            int prefix_arcs) {
    // Hybrid evaluation: the fixed prefix at its true duration, the remainder
    // on the auxiliary graph with the window-updated constants.
    double clock = g.start_time() + prefix_true;
    const int n = static_cast<int>(tour.size());
    for (int pos = prefix_arcs; pos < upto; ++pos) {
        int i = tour[pos], j = tour[(pos + 1) % n];
        clock += igp_travel_time(la.b, costs.at(i, j), clock);
    }
    return clock - g.start_time();
}

} // namespace

SolveReport solve_tdtsp(const TdGraph& g, const SolveConfig& config) {
    using clock_type = std::chrono::steady_clock;
    const auto t_begin = clock_type::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(clock_type::now() - t_begin).count();
    };

    if (!g.is_complete())
        throw std::invalid_argument("solve_tdtsp: needs a complete instance");
    const int n = g.num_vertices();
    const double eps = kEpsCost;

    SolveReport rep;
    CtcpResult ctcp = check(g, config.rho, config.grid);
    LowerApproxGraph la = lower_graph(g, ctcp);

    // Root: STEP 1-3 bound pair.
    BoundPair root = bound_pair(g, la);
    rep.nodes = 1;
    double ub = root.upper;
    std::vector<int> incumbent = root.tour;
    rep.lb_initial = root.lower;
    rep.ub_initial = root.upper;
    rep.gap_initial = root.lower > 0.0 ? (root.upper - root.lower) / root.lower : 0.0;
    if (config.trace) config.trace->push_back({root.lower, ub});

    long next_id = 0;
    std::priority_queue<BnbNode, std::vector<BnbNode>, OpenOrder> open;
    if (ub - root.lower > eps) {
        BnbNode root_node;
        root_node.lb = root.lower;
        root_node.id = next_id++;
        open.push(std::move(root_node));
    }

    bool timed_out = false;
    while (!open.empty()) {
        if (elapsed() > config.time_limit_seconds) {
            timed_out = true;
            break;
        }
        BnbNode node = open.top();
        open.pop();
        if (node.lb >= ub - eps) continue;

        const int k = node.depth();
        double prefix_true = path_duration(g, node.prefix, g.start_time());
        double t_lo = g.start_time() + prefix_true;
        double t_hi = g.start_time() + ub;
        if (t_lo > t_hi + eps) continue; // prefix alone already exceeds the incumbent
        CostMatrix costs = node_costs(ctcp, n, t_lo, std::max(t_lo, t_hi));

        AtspConstraints cons;
        for (int j = 1; j < static_cast<int>(node.prefix.size()); ++j)
            cons.forced.push_back({node.prefix[j - 1], node.prefix[j]});
        cons.forbidden = node.forbidden;
        AtspResult relax = solve_atsp(costs, cons, AtspOptions{.lexicographic = false});
        ++rep.nodes;
        if (!relax.feasible) continue;

        // Rotate the relaxation tour to the depot; it honors the forced
        // prefix by construction.
        std::vector<int> tour = relax.tour;
        auto depot = std::find(tour.begin(), tour.end(), 0);
        std::rotate(tour.begin(), depot, tour.end());

        double lb1 = duration_under_costs(g, la, costs, tour, n, prefix_true, k);
        lb1 = std::max(lb1, node.lb);
        double ub1 = tour_duration(g, tour);
        if (ub1 < ub - eps) {
            ub = ub1;
            incumbent = tour;
        }
        if (config.trace) config.trace->push_back({lb1, ub});
        if (ub1 - lb1 <= eps) continue; // relaxation solved this subproblem
        if (lb1 >= ub - eps) continue;
        if (k + 1 >= n) continue; // prefix already fixes the whole tour

        // Largest index whose auxiliary-graph duration matches the true one.
        int k_prime = k + 1;
        for (int j = k + 1; j < n; ++j) {
            Path pj(tour.begin(), tour.begin() + j + 1);
            double true_d = path_duration(g, pj, g.start_time());
            double aux_d = duration_under_costs(g, la, costs, tour, j, prefix_true, k);
            if (std::fabs(true_d - aux_d) <= kEpsTime) k_prime = j;
        }
        for (BnbNode& child : branch(node, tour, k_prime, next_id)) {
            child.lb = lb1;
            if (child.lb < ub - eps) open.push(std::move(child));
        }
    }

    rep.ub_final = ub;
    rep.tour = incumbent;
    double lb_final = ub;
    if (timed_out) {
        while (!open.empty()) {
            lb_final = std::min(lb_final, open.top().lb);
            open.pop();
        }
        rep.status = SolveStatus::Gap;
    } else {
        rep.status = SolveStatus::Optimal;
        rep.optimum = ub;
    }
    rep.lb_final = lb_final;
    rep.gap_final = lb_final > 0.0 ? (ub - lb_final) / lb_final : 0.0;
    rep.wall_seconds = elapsed();
    return rep;
}

} // namespace tdroute
