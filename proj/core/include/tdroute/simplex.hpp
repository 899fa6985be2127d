#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tdroute {

inline constexpr double kEpsFeas = 1e-8;
inline constexpr double kEpsDual = 1e-7;
inline constexpr double kEpsPivot = 1e-10;

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpRow {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

/// Dense minimization LP: min c'x subject to rows with <=, =, >= relations,
/// per-variable lower bounds (default 0) and optional upper bounds. Sized
/// for the CTCP models: hundreds to a few thousand rows, dense tableau.
struct LpProblem {
    std::vector<double> objective;
    std::vector<LpRow> rows;
    std::vector<double> lower_bounds;                // empty means all-zero
    std::vector<std::optional<double>> upper_bounds; // empty means none

    int num_vars() const { return static_cast<int>(objective.size()); }
    double lower_bound(int j) const { return lower_bounds.empty() ? 0.0 : lower_bounds[j]; }
    void validate() const; // throws std::invalid_argument
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

struct LpSolution {
    LpStatus status = LpStatus::Infeasible;
    std::vector<double> x;        // primal values, original variable space
    std::vector<double> duals;    // one multiplier per row
    std::vector<double> ub_duals; // multipliers of the upper bound rows (<= 0)
    double objective = 0.0;
    long iterations = 0;
};

// Two-phase primal simplex on a dense tableau. Pivot rule: Dantzig for a
// bounded number of iterations, then Bland, which makes the solver
// deterministic and cycle-free. Infeasibility and unboundedness are reported
// through the status, never by aborting.
LpSolution solve(const LpProblem& p);

// Optimality certificate: primal feasibility, dual sign feasibility,
// nonnegative reduced costs, complementary slackness and strong duality,
// each within the given tolerances.
bool certify(const LpProblem& p, const LpSolution& s, double eps_feas = kEpsFeas,
             double eps_dual = kEpsDual);

// Fixed-column MPS dump for cross-checking against external solvers.
void write_mps(const LpProblem& p, std::ostream& os, const std::string& name = "TDROUTE");

} // namespace tdroute
