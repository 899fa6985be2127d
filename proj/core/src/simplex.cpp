#include "tdroute/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <cstdio>
#include <cstdlib>

namespace tdroute {

void LpProblem::validate() const {
    const std::size_t n = objective.size();
    if (n == 0) throw std::invalid_argument("LpProblem: no variables");
    for (double c : objective)
        if (!std::isfinite(c)) throw std::invalid_argument("LpProblem: non-finite objective");
    if (!lower_bounds.empty() && lower_bounds.size() != n)
        throw std::invalid_argument("LpProblem: lower_bounds size mismatch");
    if (!upper_bounds.empty() && upper_bounds.size() != n)
        throw std::invalid_argument("LpProblem: upper_bounds size mismatch");
    for (double lb : lower_bounds)
        if (!std::isfinite(lb)) throw std::invalid_argument("LpProblem: non-finite lower bound");
    for (const auto& row : rows) {
        if (row.coeffs.size() != n)
            throw std::invalid_argument("LpProblem: row size mismatch");
        for (double a : row.coeffs)
            if (!std::isfinite(a)) throw std::invalid_argument("LpProblem: non-finite coefficient");
        if (!std::isfinite(row.rhs)) throw std::invalid_argument("LpProblem: non-finite rhs");
    }
}

namespace {

struct Tableau {
    int m = 0;       // rows
    int ncols = 0;   // columns excluding rhs
    int width = 0;   // ncols + 1
    std::vector<double> a; // m x width, row major
    std::vector<double> z1, z2; // objective rows, width entries
    std::vector<int> basis;     // basic column per row

    double* row(int i) { return a.data() + static_cast<std::size_t>(i) * width; }
    const double* row(int i) const { return a.data() + static_cast<std::size_t>(i) * width; }

    void pivot(int r, int s) {
        double* pr = row(r);
        const double inv = 1.0 / pr[s];
        for (int j = 0; j <= ncols; ++j) pr[j] *= inv;
        pr[s] = 1.0;
        for (int i = 0; i < m; ++i) {
            if (i == r) continue;
            double* ri = row(i);
            const double f = ri[s];
            if (std::fabs(f) <= kEpsPivot) { ri[s] = 0.0; continue; }
            for (int j = 0; j <= ncols; ++j) ri[j] -= f * pr[j];
            ri[s] = 0.0;
        }
        for (auto* zrow : {&z1, &z2}) {
            double* z = zrow->data();
            const double f = z[s];
            if (std::fabs(f) <= kEpsPivot) { z[s] = 0.0; continue; }
            for (int j = 0; j <= ncols; ++j) z[j] -= f * pr[j];
            z[s] = 0.0;
        }
        basis[r] = s;
    }
};

} // namespace

LpSolution solve(const LpProblem& p) {
    p.validate();
    const int n = p.num_vars();
    const int m_user = static_cast<int>(p.rows.size());

    // Upper bounds become internal rows appended after the user rows.
    std::vector<int> ub_var;
    if (!p.upper_bounds.empty())
        for (int j = 0; j < n; ++j)
            if (p.upper_bounds[j]) ub_var.push_back(j);
    const int m = m_user + static_cast<int>(ub_var.size());

    // Shift x = lb + xhat with xhat >= 0.
    std::vector<double> lb(n, 0.0);
    for (int j = 0; j < n; ++j) lb[j] = p.lower_bound(j);

    std::vector<Relation> rel(m);
    std::vector<double> rhs(m);
    std::vector<std::vector<double>> rowc(m);
    for (int i = 0; i < m; ++i) {
        if (i < m_user) {
            rowc[i] = p.rows[i].coeffs;
            rel[i] = p.rows[i].rel;
            rhs[i] = p.rows[i].rhs;
        } else {
            rowc[i].assign(n, 0.0);
            rowc[i][ub_var[i - m_user]] = 1.0;
            rel[i] = Relation::LessEqual;
            rhs[i] = *p.upper_bounds[ub_var[i - m_user]];
        }
        for (int j = 0; j < n; ++j) rhs[i] -= rowc[i][j] * lb[j];
    }

    int n_slack = 0;
    for (int i = 0; i < m; ++i)
        if (rel[i] != Relation::Equal) ++n_slack;

    // Column layout: [structural 0..n) [slacks) [artificials)].
    std::vector<int> slack_col(m, -1), art_col(m, -1);
    std::vector<double> slack_coef(m, 0.0);
    std::vector<double> row_sign(m, 1.0);

    int col = n;
    for (int i = 0; i < m; ++i) {
        if (rel[i] == Relation::Equal) continue;
        slack_col[i] = col++;
        slack_coef[i] = (rel[i] == Relation::LessEqual) ? 1.0 : -1.0;
    }
    for (int i = 0; i < m; ++i) {
        if (rhs[i] < 0.0) {
            for (double& v : rowc[i]) v = -v;
            rhs[i] = -rhs[i];
            slack_coef[i] = -slack_coef[i];
            row_sign[i] = -1.0;
        }
    }
    int n_art = 0;
    for (int i = 0; i < m; ++i)
        if (slack_col[i] < 0 || slack_coef[i] < 0.0) ++n_art;
    const int art_start = n + n_slack;
    for (int i = 0; i < m; ++i)
        if (slack_col[i] < 0 || slack_coef[i] < 0.0) art_col[i] = col++;

    Tableau t;
    t.m = m;
    t.ncols = n + n_slack + n_art;
    t.width = t.ncols + 1;
    t.a.assign(static_cast<std::size_t>(m) * t.width, 0.0);
    t.z1.assign(t.width, 0.0);
    t.z2.assign(t.width, 0.0);
    t.basis.assign(m, -1);

    for (int i = 0; i < m; ++i) {
        double* r = t.row(i);
        for (int j = 0; j < n; ++j) r[j] = rowc[i][j];
        if (slack_col[i] >= 0) r[slack_col[i]] = slack_coef[i];
        if (art_col[i] >= 0) r[art_col[i]] = 1.0;
        r[t.ncols] = rhs[i];
        t.basis[i] = (art_col[i] >= 0) ? art_col[i] : slack_col[i];
    }
    for (int j = 0; j < n; ++j) t.z2[j] = p.objective[j];
    // Phase-1 objective: minimize the sum of artificials; subtracting the
    // artificial rows makes the basic columns' reduced costs zero.
    for (int i = 0; i < m; ++i) {
        if (art_col[i] < 0) continue;
        const double* r = t.row(i);
        for (int j = 0; j <= t.ncols; ++j) t.z1[j] -= r[j];
        t.z1[art_col[i]] = 0.0;
    }

    LpSolution sol;
    const long dantzig_limit = 10L * (m + t.ncols) + 1000;
    const long hard_limit = 500000L + 200L * (m + t.ncols);
    const bool debug = std::getenv("TDROUTE_DEBUG_LP") != nullptr;

    auto run_phase = [&](int phase) -> int {
        std::vector<double>& z = (phase == 1) ? t.z1 : t.z2;
        const int limit_col = (phase == 1) ? t.ncols : art_start;
        while (true) {
            if (sol.iterations > hard_limit)
                throw std::runtime_error("simplex: iteration limit exceeded");
            if (debug && sol.iterations % 2000 == 0)
                std::fprintf(stderr, "[lp] phase %d iter %ld obj %.8g\n", phase, sol.iterations,
                             -z[t.ncols]);
            const bool bland = sol.iterations > dantzig_limit;
            const double enter_tol = 1e-9;
            int s = -1;
            double best = -enter_tol;
            for (int j = 0; j < limit_col; ++j) {
                if (z[j] < best) {
                    s = j;
                    if (bland) break;
                    best = z[j];
                }
            }
            if (s < 0) return 0; // optimal for this phase

            // Ratio test in two passes: find the minimum ratio over columns
            // with a usably large pivot element, then take the numerically
            // best row among the ties (smallest basis index on equal
            // footing). Tiny pivots corrupt the tableau.
            const double piv_tol = 1e-7;
            double best_ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                double coef = t.row(i)[s];
                if (coef <= piv_tol) continue;
                double rhsv = std::max(t.row(i)[t.ncols], 0.0);
                best_ratio = std::min(best_ratio, rhsv / coef);
            }
            if (!std::isfinite(best_ratio)) return 1; // unbounded direction
            const double ratio_tol = 1e-9 * (1.0 + best_ratio);
            int r = -1;
            double r_coef = 0.0;
            for (int i = 0; i < m; ++i) {
                double coef = t.row(i)[s];
                if (coef <= piv_tol) continue;
                double rhsv = std::max(t.row(i)[t.ncols], 0.0);
                if (rhsv / coef > best_ratio + ratio_tol) continue;
                if (r < 0 || coef > 4.0 * r_coef ||
                    (coef > 0.25 * r_coef && t.basis[i] < t.basis[r])) {
                    r = i;
                    r_coef = coef;
                }
            }
            t.pivot(r, s);
            ++sol.iterations;
        }
    };

    if (n_art > 0) {
        run_phase(1);
        // z1's rhs cell holds minus the phase-1 objective value.
        if (-t.z1[t.ncols] > kEpsFeas) {
            sol.status = LpStatus::Infeasible;
            return sol;
        }
        // Drive zero-level artificials out of the basis where possible;
        // rows that stay artificial-basic are redundant.
        for (int i = 0; i < m; ++i) {
            if (t.basis[i] < art_start) continue;
            const double* r = t.row(i);
            for (int j = 0; j < art_start; ++j) {
                if (std::fabs(r[j]) > 1e-7) {
                    t.pivot(i, j);
                    ++sol.iterations;
                    break;
                }
            }
        }
    }

    if (run_phase(2) == 1) {
        sol.status = LpStatus::Unbounded;
        return sol;
    }

    sol.status = LpStatus::Optimal;
    sol.x.assign(n, 0.0);
    std::vector<double> xhat(t.ncols, 0.0);
    for (int i = 0; i < m; ++i) xhat[t.basis[i]] = t.row(i)[t.ncols];
    for (int j = 0; j < n; ++j) sol.x[j] = lb[j] + xhat[j];
    sol.objective = 0.0;
    for (int j = 0; j < n; ++j) sol.objective += p.objective[j] * sol.x[j];

    // Duals from the reduced costs of each row's slack (or artificial)
    // column: r_col = -sign * y_i in the normalized system.
    std::vector<double> y(m, 0.0);
    for (int i = 0; i < m; ++i) {
        double rc, coef;
        if (slack_col[i] >= 0) {
            rc = t.z2[slack_col[i]];
            coef = slack_coef[i];
        } else {
            rc = t.z2[art_col[i]];
            coef = 1.0;
        }
        y[i] = row_sign[i] * (-rc / coef);
    }
    sol.duals.assign(y.begin(), y.begin() + m_user);
    sol.ub_duals.assign(n, 0.0);
    for (std::size_t k = 0; k < ub_var.size(); ++k)
        sol.ub_duals[ub_var[k]] = y[m_user + static_cast<int>(k)];
    return sol;
}

bool certify(const LpProblem& p, const LpSolution& s, double eps_feas, double eps_dual) {
    if (s.status != LpStatus::Optimal) return false;
    const int n = p.num_vars();
    if (static_cast<int>(s.x.size()) != n) return false;
    if (s.duals.size() != p.rows.size()) return false;

    // Primal feasibility.
    for (int j = 0; j < n; ++j) {
        if (s.x[j] < p.lower_bound(j) - eps_feas) return false;
        if (!p.upper_bounds.empty() && p.upper_bounds[j] && s.x[j] > *p.upper_bounds[j] + eps_feas)
            return false;
    }
    std::vector<double> act(p.rows.size(), 0.0);
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        for (int j = 0; j < n; ++j) act[i] += p.rows[i].coeffs[j] * s.x[j];
        const double tol = eps_feas * std::max(1.0, std::fabs(p.rows[i].rhs));
        switch (p.rows[i].rel) {
            case Relation::LessEqual:
                if (act[i] > p.rows[i].rhs + tol) return false;
                break;
            case Relation::GreaterEqual:
                if (act[i] < p.rows[i].rhs - tol) return false;
                break;
            case Relation::Equal:
                if (std::fabs(act[i] - p.rows[i].rhs) > tol) return false;
                break;
        }
    }

    // Dual sign feasibility (minimization: <= rows have y <= 0, >= rows y >= 0).
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        if (p.rows[i].rel == Relation::LessEqual && s.duals[i] > eps_dual) return false;
        if (p.rows[i].rel == Relation::GreaterEqual && s.duals[i] < -eps_dual) return false;
    }
    for (int j = 0; j < n; ++j) {
        double w = j < static_cast<int>(s.ub_duals.size()) ? s.ub_duals[j] : 0.0;
        if (w > eps_dual) return false;
    }

    // Reduced costs and complementary slackness.
    double dual_obj = 0.0;
    for (std::size_t i = 0; i < p.rows.size(); ++i) dual_obj += s.duals[i] * p.rows[i].rhs;
    for (int j = 0; j < n; ++j) {
        double r = p.objective[j];
        for (std::size_t i = 0; i < p.rows.size(); ++i) r -= s.duals[i] * p.rows[i].coeffs[j];
        double w = j < static_cast<int>(s.ub_duals.size()) ? s.ub_duals[j] : 0.0;
        r -= w;
        if (r < -eps_dual * std::max(1.0, std::fabs(p.objective[j]))) return false;
        if (std::fabs(r) * std::fabs(s.x[j] - p.lower_bound(j)) >
            eps_dual * std::max(1.0, std::fabs(s.objective)))
            return false;
        dual_obj += r * p.lower_bound(j);
        if (!p.upper_bounds.empty() && p.upper_bounds[j]) {
            if (std::fabs(w) * std::fabs(*p.upper_bounds[j] - s.x[j]) >
                eps_dual * std::max(1.0, std::fabs(s.objective)))
                return false;
            dual_obj += w * *p.upper_bounds[j];
        }
    }
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (std::fabs(s.duals[i]) * std::fabs(act[i] - p.rows[i].rhs) >
            eps_dual * std::max(1.0, std::fabs(s.objective)))
            return false;

    // Strong duality.
    return std::fabs(s.objective - dual_obj) <= eps_dual * std::max(1.0, std::fabs(s.objective));
}

void write_mps(const LpProblem& p, std::ostream& os, const std::string& name) {
    auto field = [](const std::string& v, int width) {
        std::string out = v;
        if (static_cast<int>(out.size()) < width) out.resize(width, ' ');
        return out;
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.10g", v);
        return std::string(buf);
    };
    os << "NAME          " << name << "\n";
    os << "ROWS\n";
    os << " N  COST\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i) {
        char r = p.rows[i].rel == Relation::LessEqual ? 'L'
                 : p.rows[i].rel == Relation::Equal   ? 'E'
                                                      : 'G';
        os << " " << r << "  R" << i << "\n";
    }
    os << "COLUMNS\n";
    for (int j = 0; j < p.num_vars(); ++j) {
        std::string xj = "X" + std::to_string(j);
        if (p.objective[j] != 0.0)
            os << "    " << field(xj, 10) << field("COST", 10) << num(p.objective[j]) << "\n";
        for (std::size_t i = 0; i < p.rows.size(); ++i)
            if (p.rows[i].coeffs[j] != 0.0)
                os << "    " << field(xj, 10) << field("R" + std::to_string(i), 10)
                   << num(p.rows[i].coeffs[j]) << "\n";
    }
    os << "RHS\n";
    for (std::size_t i = 0; i < p.rows.size(); ++i)
        if (p.rows[i].rhs != 0.0)
            os << "    " << field("RHS", 10) << field("R" + std::to_string(i), 10)
               << num(p.rows[i].rhs) << "\n";
    os << "BOUNDS\n";
    for (int j = 0; j < p.num_vars(); ++j) {
        if (p.lower_bound(j) != 0.0)
            os << " LO " << field("BND", 10) << field("X" + std::to_string(j), 10)
               << num(p.lower_bound(j)) << "\n";
        if (!p.upper_bounds.empty() && p.upper_bounds[j])
            os << " UP " << field("BND", 10) << field("X" + std::to_string(j), 10)
               << num(*p.upper_bounds[j]) << "\n";
    }
    os << "ENDATA\n";
}

} // namespace tdroute
