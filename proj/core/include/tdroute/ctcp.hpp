#pragma once

#include "tdroute/omega.hpp"
#include "tdroute/simplex.hpp"
#include "tdroute/tdgraph.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdroute {

/// Which candidate breakpoint grid the CTCP model is built on. Exact builds
/// the Omega sets and falls back to the reduced grid when |Omega| exceeds
/// the cap; Reduced uses k equal-width intervals spanning [0, T].
struct GridPolicy {
    enum class Kind { Exact, Reduced };
    Kind kind = Kind::Reduced;
    int k = 75;
    int cap = 512;

    static GridPolicy exact(int cap = 512) { return {Kind::Exact, 75, cap}; }
    static GridPolicy reduced(int k = 75) { return {Kind::Reduced, k, 512}; }
};

// Time spent inside grid interval h = [t_h, t_{h+1}) by a traversal starting
// at s: the overlap of [s, arrival(s)] with the interval; the final interval
// extends to +infinity.
double coefficient(const PwlFunction& tau, const std::vector<double>& grid, double s, int h);

/// The CTCP linear program: one range variable zeta, a step value y_h per
/// grid interval, and per arc one sampled cost x_ijk per start time plus the
/// min/max trackers. Arcs with identical travel time functions and start
/// sets share one variable class internally; counts and to_lp() report the
/// full per-arc formulation.
class CtcpModel {
public:
    struct ArcEntry {
        Arc arc;
        int class_id;
    };
    struct ClassData {
        PwlFunction tau;
        std::vector<double> starts;
        // Sparse coefficient row per start: (interval h, time spent).
        std::vector<std::vector<std::pair<int, double>>> coeff;
    };

    CtcpModel(const TdGraph& g, std::vector<double> grid,
              std::map<Arc, std::vector<double>> start_sets, double rho);

    const std::vector<double>& grid() const { return grid_; }
    double rho() const { return rho_; }
    const std::vector<ArcEntry>& arcs() const { return arcs_; }
    const std::vector<ClassData>& classes() const { return classes_; }
    const std::vector<double>& start_set(std::size_t arc_idx) const {
        return classes_[arcs_[arc_idx].class_id].starts;
    }

    // Full-model sizes: 1 zeta + |grid| y + per-arc x blocks + per-arc
    // min/max pair.
    int num_variables() const;
    int num_rows_c1() const; // x_ijk = sum_h a_ijkh y_h
    int num_rows_c2() const; // zeta >= xmax - xmin
    int num_rows_c3() const; // xmin <= x_ijk
    int num_rows_c4() const; // xmax >= x_ijk

    // Variable indices in the full LP layout.
    int zeta_index() const { return 0; }
    int y_index(int h) const { return 1 + h; }
    int x_index(std::size_t arc_idx, int k) const;
    int xmin_index(std::size_t arc_idx) const;
    int xmax_index(std::size_t arc_idx) const;

    // Materializes the complete LP (c1)-(c5); intended for tests and small
    // models, the solver works on the class-deduplicated form.
    LpProblem to_lp() const;

private:
    std::vector<double> grid_;
    double rho_;
    std::vector<ArcEntry> arcs_;
    std::vector<ClassData> classes_;
    std::vector<int> x_offsets_; // per arc, offset of its x block
    int total_x_ = 0;
};

struct CtcpResult {
    double zeta_star = 0.0;
    bool is_invariant = false;
    double eps_zero = 0.0;
    double rho = 0.0;
    GridPolicy::Kind grid_kind = GridPolicy::Kind::Exact;
    bool grid_fallback = false; // exact requested but |Omega| exceeded the cap
    std::vector<double> grid;
    std::optional<StepFunction> y_star;
    std::map<Arc, double> x_min;           // optimal sampled minimum per arc
    std::map<Arc, PwlFunction> x_funcs;    // interpolation of the sampled x values
    std::map<Arc, PwlFunction> cost_funcs; // exact travel cost profile under y_star
    long lp_iterations = 0;

    void write_kv(std::ostream& os) const;
    std::string to_kv() const;
};

CtcpModel build_model(const TdGraph& g, const OmegaSets& omega, double rho);
CtcpModel build_model(const TdGraph& g, const std::vector<double>& reduced_grid, double rho);

// Equal-width reduced grid with k instants: t_h = h * T / k, h = 0..k-1.
std::vector<double> reduced_grid(const TdGraph& g, int k);

// Default unit-cost floor: 1 / (smallest grid interval width).
double default_rho(const std::vector<double>& grid);

// Threshold under which zeta* counts as zero: 1e-6 times the mean arc
// duration of the graph.
double eps_zero_for(const TdGraph& g);

// The decision procedure: build the grid per policy, solve the LP, report
// the optimum and the step function generating it. On the exact Omega grid
// is_invariant certifies path ranking invariance; on reduced grids it is
// only a surrogate check.
CtcpResult check(const TdGraph& g, std::optional<double> rho = std::nullopt,
                 GridPolicy policy = GridPolicy::exact());

} // namespace tdroute
