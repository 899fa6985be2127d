#include "tdroute/ctcp.hpp"
#include <cstdio>
#include <cstdlib>

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace tdroute {

double coefficient(const PwlFunction& tau, const std::vector<double>& grid, double s, int h) {
    if (h < 0 || h >= static_cast<int>(grid.size()))
        throw std::invalid_argument("coefficient: interval index out of range");
    // The first value extends below the grid and the last beyond it, mirroring
    // the step function's clamped extension; this keeps sum_h a_ijkh equal to
    // the full traversal time for every start.
    double lo = (h == 0) ? -std::numeric_limits<double>::infinity() : grid[h];
    double hi = (h + 1 < static_cast<int>(grid.size()))
                    ? grid[h + 1]
                    : std::numeric_limits<double>::infinity();
    double a = std::min(arrival(tau, s), hi) - std::max(s, lo);
    return std::max(0.0, a);
}

namespace {

std::vector<std::pair<int, double>> coefficient_row(const PwlFunction& tau,
                                                    const std::vector<double>& grid, double s) {
    std::vector<std::pair<int, double>> out;
    double reach = arrival(tau, s);
    auto it = std::upper_bound(grid.begin(), grid.end(), s);
    int h = std::max(0, static_cast<int>(it - grid.begin()) - 1);
    for (; h < static_cast<int>(grid.size()); ++h) {
        if (grid[h] >= reach) break;
        double a = coefficient(tau, grid, s, h);
        if (a > 0.0) out.push_back({h, a});
    }
    return out;
}

} // namespace

CtcpModel::CtcpModel(const TdGraph& g, std::vector<double> grid,
                     std::map<Arc, std::vector<double>> start_sets, double rho)
    : grid_(std::move(grid)), rho_(rho) {
    if (grid_.empty()) throw std::invalid_argument("CtcpModel: empty grid");
    if (!(rho_ > 0.0)) throw std::invalid_argument("CtcpModel: rho must be positive");
    for (const auto& a : g.arcs()) {
        auto it = start_sets.find(a);
        if (it == start_sets.end() || it->second.empty())
            throw std::invalid_argument("CtcpModel: missing start set for an arc");
        const PwlFunction& tau = g.arc(a.first, a.second);
        // Arcs with the same travel time and start set share a class.
        int cls = -1;
        for (std::size_t c = 0; c < classes_.size(); ++c) {
            if (classes_[c].tau == tau && classes_[c].starts == it->second) {
                cls = static_cast<int>(c);
                break;
            }
        }
        if (cls < 0) {
            ClassData cd{tau, it->second, {}};
            cd.coeff.reserve(cd.starts.size());
            for (double s : cd.starts) cd.coeff.push_back(coefficient_row(tau, grid_, s));
            cls = static_cast<int>(classes_.size());
            classes_.push_back(std::move(cd));
        }
        arcs_.push_back({a, cls});
    }
    x_offsets_.reserve(arcs_.size());
    for (const auto& ae : arcs_) {
        x_offsets_.push_back(total_x_);
        total_x_ += static_cast<int>(classes_[ae.class_id].starts.size());
    }
}

int CtcpModel::num_variables() const {
    return 1 + static_cast<int>(grid_.size()) + total_x_ + 2 * static_cast<int>(arcs_.size());
}

int CtcpModel::num_rows_c1() const { return total_x_; }
int CtcpModel::num_rows_c2() const { return static_cast<int>(arcs_.size()); }
int CtcpModel::num_rows_c3() const { return total_x_; }
int CtcpModel::num_rows_c4() const { return total_x_; }

int CtcpModel::x_index(std::size_t arc_idx, int k) const {
    return 1 + static_cast<int>(grid_.size()) + x_offsets_[arc_idx] + k;
}

int CtcpModel::xmin_index(std::size_t arc_idx) const {
    return 1 + static_cast<int>(grid_.size()) + total_x_ + 2 * static_cast<int>(arc_idx);
}

int CtcpModel::xmax_index(std::size_t arc_idx) const {
    return xmin_index(arc_idx) + 1;
}

LpProblem CtcpModel::to_lp() const {
    LpProblem p;
    const int n = num_variables();
    p.objective.assign(n, 0.0);
    p.objective[zeta_index()] = 1.0;
    p.lower_bounds.assign(n, 0.0);
    for (std::size_t h = 0; h < grid_.size(); ++h) p.lower_bounds[y_index(static_cast<int>(h))] = rho_;

    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        const ClassData& cd = classes_[arcs_[a].class_id];
        for (std::size_t k = 0; k < cd.starts.size(); ++k) {
            LpRow row;
            row.coeffs.assign(n, 0.0);
            row.coeffs[x_index(a, static_cast<int>(k))] = 1.0;
            for (const auto& [h, c] : cd.coeff[k]) row.coeffs[y_index(h)] = -c;
            row.rel = Relation::Equal;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
        }
    }
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        LpRow row;
        row.coeffs.assign(n, 0.0);
        row.coeffs[zeta_index()] = 1.0;
        row.coeffs[xmax_index(a)] = -1.0;
        row.coeffs[xmin_index(a)] = 1.0;
        row.rel = Relation::GreaterEqual;
        row.rhs = 0.0;
        p.rows.push_back(std::move(row));
    }
    for (std::size_t a = 0; a < arcs_.size(); ++a) {
        const ClassData& cd = classes_[arcs_[a].class_id];
        for (std::size_t k = 0; k < cd.starts.size(); ++k) {
            LpRow row;
            row.coeffs.assign(n, 0.0);
            row.coeffs[xmin_index(a)] = 1.0;
            row.coeffs[x_index(a, static_cast<int>(k))] = -1.0;
            row.rel = Relation::LessEqual;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
        }
        for (std::size_t k = 0; k < cd.starts.size(); ++k) {
            LpRow row;
            row.coeffs.assign(n, 0.0);
            row.coeffs[xmax_index(a)] = 1.0;
            row.coeffs[x_index(a, static_cast<int>(k))] = -1.0;
            row.rel = Relation::GreaterEqual;
            row.rhs = 0.0;
            p.rows.push_back(std::move(row));
        }
    }
    return p;
}

CtcpModel build_model(const TdGraph& g, const OmegaSets& omega, double rho) {
    std::map<Arc, std::vector<double>> starts;
    for (const auto& [arc, ts] : omega.per_arc) starts[arc] = ts;
    return CtcpModel(g, omega.global, std::move(starts), rho);
}

CtcpModel build_model(const TdGraph& g, const std::vector<double>& reduced, double rho) {
    std::map<Arc, std::vector<double>> starts;
    for (const auto& a : g.arcs()) starts[a] = reduced;
    return CtcpModel(g, reduced, std::move(starts), rho);
}

std::vector<double> reduced_grid(const TdGraph& g, int k) {
    if (k < 2) throw std::invalid_argument("reduced_grid: need at least 2 instants");
    std::vector<double> grid(k);
    for (int h = 0; h < k; ++h) grid[h] = g.horizon() * h / k;
    return grid;
}

double default_rho(const std::vector<double>& grid) {
    double w = std::numeric_limits<double>::infinity();
    for (std::size_t h = 1; h < grid.size(); ++h) w = std::min(w, grid[h] - grid[h - 1]);
    return std::isfinite(w) && w > 0.0 ? 1.0 / w : 1.0;
}

double eps_zero_for(const TdGraph& g) {
    double sum = 0.0;
    for (const auto& [i, j] : g.arcs()) sum += g.arc(i, j).integral(0.0, g.horizon()) / g.horizon();
    return 1e-6 * sum / g.num_arcs();
}

namespace {

// Lazy row generation over the class-substituted LP: variables
// [zeta, y_0.., per class (xmin_c, xmax_c)], rows (c2) per class plus the
// currently active (c3)/(c4) samples. A working optimum with no violated
// sample is optimal for the full model because the working LP is a
// relaxation of it. Inactive rows are dropped when the working set grows
// past a budget; dropping stops after many rounds so convergence stays
// finite.
struct RowGenSolver {
    const CtcpModel& model;
    int H;
    int C;
    std::vector<std::vector<char>> active3, active4;
    std::vector<std::vector<int>> added_round3, added_round4;
    std::vector<std::size_t> anchor_min, anchor_max;
    std::vector<double> tau_min_sum, tau_max_sum; // min/max of sum_h a_kh per class
    LpSolution last;

    explicit RowGenSolver(const CtcpModel& m)
        : model(m), H(static_cast<int>(m.grid().size())), C(static_cast<int>(m.classes().size())) {
        active3.resize(C);
        active4.resize(C);
        added_round3.resize(C);
        added_round4.resize(C);
        anchor_min.resize(C);
        anchor_max.resize(C);
        tau_min_sum.resize(C);
        tau_max_sum.resize(C);
        for (int c = 0; c < C; ++c) {
            const auto& cls = model.classes()[c];
            const std::size_t ns = cls.starts.size();
            active3[c].assign(ns, 0);
            active4[c].assign(ns, 0);
            added_round3[c].assign(ns, 0);
            added_round4[c].assign(ns, 0);
            // sum_h a_kh equals tau at the start, so the travel time extremes
            // anchor the min/max trackers.
            std::size_t lo = 0, hi = 0;
            for (std::size_t k = 1; k < ns; ++k) {
                if (cls.tau.value(cls.starts[k]) < cls.tau.value(cls.starts[lo])) lo = k;
                if (cls.tau.value(cls.starts[k]) > cls.tau.value(cls.starts[hi])) hi = k;
            }
            anchor_min[c] = lo;
            anchor_max[c] = hi;
            tau_min_sum[c] = cls.tau.value(cls.starts[lo]);
            tau_max_sum[c] = cls.tau.value(cls.starts[hi]);
            active3[c][lo] = active3[c][hi] = 1;
            active4[c][lo] = active4[c][hi] = 1;
            // A few evenly spaced samples cut down the generation rounds.
            for (std::size_t q = 0; q < ns; q += std::max<std::size_t>(1, ns / 5)) {
                active3[c][q] = 1;
                active4[c][q] = 1;
            }
        }
    }

    int zeta() const { return 0; }
    int y(int h) const { return 1 + h; }
    int xmin(int c) const { return 1 + H + 2 * c; }
    int xmax(int c) const { return 1 + H + 2 * c + 1; }
    int nvars() const { return 1 + H + 2 * C; }

    LpProblem working_lp() const {
        LpProblem p;
        p.objective.assign(nvars(), 0.0);
        p.objective[zeta()] = 1.0;
        p.lower_bounds.assign(nvars(), 0.0);
        for (int h = 0; h < H; ++h) p.lower_bounds[y(h)] = model.rho();
        // Valid tightenings that keep the all-slack start feasible: every
        // optimum has xmin >= rho * min_k sum(a) and xmax >= rho * max_k.
        for (int c = 0; c < C; ++c) {
            p.lower_bounds[xmin(c)] = model.rho() * tau_min_sum[c];
            p.lower_bounds[xmax(c)] = model.rho() * tau_max_sum[c];
        }
        for (int c = 0; c < C; ++c) {
            LpRow row;
            row.coeffs.assign(nvars(), 0.0);
            row.coeffs[zeta()] = 1.0;
            row.coeffs[xmax(c)] = -1.0;
            row.coeffs[xmin(c)] = 1.0;
            row.rel = Relation::GreaterEqual;
            p.rows.push_back(std::move(row));
        }
        for (int c = 0; c < C; ++c) {
            const auto& cls = model.classes()[c];
            for (std::size_t k = 0; k < cls.starts.size(); ++k) {
                if (active3[c][k]) {
                    LpRow row;
                    row.coeffs.assign(nvars(), 0.0);
                    row.coeffs[xmin(c)] = 1.0;
                    for (const auto& [h, a] : cls.coeff[k]) row.coeffs[y(h)] -= a;
                    row.rel = Relation::LessEqual;
                    p.rows.push_back(std::move(row));
                }
                if (active4[c][k]) {
                    // Written as sum(a y) - xmax <= 0 so the slack basis
                    // starts feasible under the tightened bounds.
                    LpRow row;
                    row.coeffs.assign(nvars(), 0.0);
                    row.coeffs[xmax(c)] = -1.0;
                    for (const auto& [h, a] : cls.coeff[k]) row.coeffs[y(h)] += a;
                    row.rel = Relation::LessEqual;
                    p.rows.push_back(std::move(row));
                }
            }
        }
        return p;
    }

    double sample_value(int c, std::size_t k, const std::vector<double>& x) const {
        double v = 0.0;
        for (const auto& [h, a] : model.classes()[c].coeff[k]) v += a * x[y(h)];
        return v;
    }

    long active_rows() const {
        long total = 0;
        for (int c = 0; c < C; ++c) {
            for (char a : active3[c]) total += a;
            for (char a : active4[c]) total += a;
        }
        return total;
    }

    // Returns total LP iterations spent.
    long run() {
        long iters = 0;
        double scale = 1.0;
        for (int c = 0; c < C; ++c) scale = std::max(scale, tau_max_sum[c] * model.rho());
        const double tol = 1e-9 * scale;
        const long row_budget = 700;
        for (int round = 0;; ++round) {
            if (round > 500) throw std::runtime_error("ctcp: row generation failed to converge");
            LpProblem p = working_lp();
            last = solve(p);
            if (std::getenv("TDROUTE_DEBUG_LP"))
                std::fprintf(stderr, "[ctcp] round %d rows=%zu iters=%ld obj=%.6g\n", round,
                             p.rows.size(), last.iterations, last.objective);
            iters += last.iterations;
            if (last.status != LpStatus::Optimal)
                throw std::runtime_error("ctcp: LP unexpectedly not optimal");

            bool violated = false;
            for (int c = 0; c < C; ++c) {
                const auto& cls = model.classes()[c];
                double vmin = last.x[xmin(c)], vmax = last.x[xmax(c)];
                std::size_t k3 = 0, k4 = 0;
                double w3 = tol, w4 = tol;
                for (std::size_t k = 0; k < cls.starts.size(); ++k) {
                    double v = sample_value(c, k, last.x);
                    if (vmin - v > w3) { w3 = vmin - v; k3 = k; }
                    if (v - vmax > w4) { w4 = v - vmax; k4 = k; }
                }
                if (w3 > tol && !active3[c][k3]) {
                    active3[c][k3] = 1;
                    added_round3[c][k3] = round;
                    violated = true;
                }
                if (w4 > tol && !active4[c][k4]) {
                    active4[c][k4] = 1;
                    added_round4[c][k4] = round;
                    violated = true;
                }
            }
            if (!violated) return iters;

            // Shed slack rows when over budget; anchors and fresh rows stay.
            if (round < 60 && active_rows() > row_budget) {
                for (int c = 0; c < C; ++c) {
                    const auto& cls = model.classes()[c];
                    double vmin = last.x[xmin(c)], vmax = last.x[xmax(c)];
                    for (std::size_t k = 0; k < cls.starts.size(); ++k) {
                        double v = sample_value(c, k, last.x);
                        if (active3[c][k] && k != anchor_min[c] && round - added_round3[c][k] >= 2 &&
                            v - vmin > 1e3 * tol)
                            active3[c][k] = 0;
                        if (active4[c][k] && k != anchor_max[c] && round - added_round4[c][k] >= 2 &&
                            vmax - v > 1e3 * tol)
                            active4[c][k] = 0;
                    }
                }
            }
        }
    }
};

} // namespace

void CtcpResult::write_kv(std::ostream& os) const {
    os << "zeta_star=" << zeta_star << "\n";
    os << "invariant=" << (is_invariant ? "yes" : "no") << "\n";
    os << "grid=" << (grid_kind == GridPolicy::Kind::Exact ? "exact" : "reduced") << "\n";
    os << "grid_size=" << grid.size() << "\n";
    os << "rho=" << rho << "\n";
    os << "eps_zero=" << eps_zero << "\n";
    for (const auto& [arc, v] : x_min)
        os << "c_min_" << arc.first << "_" << arc.second << "=" << v << "\n";
}

std::string CtcpResult::to_kv() const {
    std::ostringstream ss;
    write_kv(ss);
    return ss.str();
}

CtcpResult check(const TdGraph& g, std::optional<double> rho_opt, GridPolicy policy) {
    if (g.num_arcs() == 0) throw std::invalid_argument("ctcp::check: graph has no arcs");

    CtcpResult res;
    std::optional<CtcpModel> model;
    if (policy.kind == GridPolicy::Kind::Exact) {
        OmegaSets omega = build_omega(g);
        if (static_cast<int>(omega.global.size()) <= policy.cap) {
            res.grid_kind = GridPolicy::Kind::Exact;
            double rho = rho_opt ? *rho_opt : default_rho(omega.global);
            model.emplace(build_model(g, omega, rho));
        } else {
            res.grid_fallback = true;
        }
    }
    if (!model.has_value()) {
        res.grid_kind = GridPolicy::Kind::Reduced;
        std::vector<double> grid = reduced_grid(g, policy.k);
        double rho = rho_opt ? *rho_opt : default_rho(grid);
        model.emplace(build_model(g, grid, rho));
    }

    res.grid = model->grid();
    res.rho = model->rho();
    res.eps_zero = eps_zero_for(g);

    RowGenSolver solver(*model);
    res.lp_iterations = solver.run();
    const LpSolution& s = solver.last;

    res.zeta_star = s.objective;
    res.is_invariant = res.zeta_star <= res.eps_zero;

    std::vector<double> yvals(model->grid().size());
    for (std::size_t h = 0; h < yvals.size(); ++h) yvals[h] = s.x[solver.y(static_cast<int>(h))];
    res.y_star = StepFunction::on_grid(model->grid(), yvals);

    for (const auto& ae : model->arcs()) {
        const auto& cls = model->classes()[ae.class_id];
        std::vector<PwlFunction::Breakpoint> pts;
        pts.reserve(cls.starts.size());
        double vmin = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < cls.starts.size(); ++k) {
            double v = solver.sample_value(ae.class_id, k, s.x);
            vmin = std::min(vmin, v);
            pts.push_back({cls.starts[k], v});
        }
        res.x_min[ae.arc] = vmin;
        res.x_funcs.emplace(ae.arc, PwlFunction(std::move(pts)).simplified());

        // Exact cost profile under y*; on the exact Omega grid this
        // coincides with the x interpolation, on reduced grids it is the
        // true function the surrogate approximates.
        std::vector<double> ts = cost_breakpoints(cls.tau, *res.y_star);
        ts.push_back(0.0);
        ts.push_back(g.horizon());
        ts = merge_times(std::move(ts));
        std::vector<PwlFunction::Breakpoint> cps;
        cps.reserve(ts.size());
        for (double t : ts) cps.push_back({t, travel_cost(cls.tau, *res.y_star, t)});
        res.cost_funcs.emplace(ae.arc, PwlFunction(std::move(cps)).simplified());
    }
    return res;
}

} // namespace tdroute
