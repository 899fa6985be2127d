// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// fails. Heavier criteria fan out across worker threads; results are reduced
// deterministically.

#include "oracles.hpp"
#include "tdroute/bnb.hpp"
#include "tdroute/bounds.hpp"
#include "tdroute/ctcp.hpp"
#include "tdroute/instgen.hpp"
#include "tdroute/omega.hpp"
#include "tdroute/rng.hpp"
#include "tdroute/simplex.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#ifndef TDROUTE_CLI_PATH
#define TDROUTE_CLI_PATH "tdroute"
#endif

using namespace tdroute;

namespace {

struct Failure {
    std::string detail;
};

struct Checker {
    std::mutex mu;
    std::vector<std::string> failures;
    void fail(const std::string& msg) {
        std::lock_guard<std::mutex> lock(mu);
        failures.push_back(msg);
    }
    void require(bool ok, const std::string& msg) {
        if (!ok) fail(msg);
    }
};

void parallel_for(int count, const std::function<void(int)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    int nthreads = std::max(1, std::min<int>(count, hw ? static_cast<int>(std::min(hw, 8u)) : 1));
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < nthreads; ++t)
        pool.emplace_back([&] {
            while (true) {
                int i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

bool approx_time_set(const std::vector<double>& got, const std::vector<double>& want) {
    if (got.size() != want.size()) return false;
    for (std::size_t i = 0; i < got.size(); ++i)
        if (std::fabs(got[i] - want[i]) > 1e-9) return false;
    return true;
}

// ---- criterion 1: worked single-arc reconstruction --------------------

std::string criterion_figure1() {
    Checker ck;
    PwlFunction tau{{0, 2}, {4, 2}, {5, 3}};
    ck.require(approx_time_set(time_sequence(tau, 5.0, 4.0).times, {0, 2, 4}),
               "time_sequence(4.0) != {0,2,4}");
    ck.require(approx_time_set(time_sequence(tau, 5.0, 5.0).times, {1, 3, 5}),
               "time_sequence(5.0) != {1,3,5}");

    TdGraph g(2, 5.0);
    g.add_arc(0, 1, tau);
    OmegaSets om = build_omega(g);
    ck.require(approx_time_set(om.per_arc.at({0, 1}), {0, 1, 2, 3, 4, 5}),
               "Omega_ij != {0..5}");

    CtcpResult res = check(g, std::nullopt, GridPolicy::exact());
    ck.require(res.grid_kind == GridPolicy::Kind::Exact, "grid not exact");
    ck.require(res.zeta_star <= 1e-6, "zeta_star > 1e-6");
    if (res.y_star.has_value()) {
        for (int s = 0; s <= 1000; ++s) {
            double t = 5.0 * s / 1000.0;
            if (std::fabs(travel_cost(tau, *res.y_star, t) - 3.0) > 1e-6) {
                ck.fail("travel cost under y* differs from 3 at t=" + std::to_string(t));
                break;
            }
        }
    } else {
        ck.fail("no y*");
    }
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 2: yes-instance soundness ------------------------------

std::string criterion_yes_instances() {
    Checker ck;
    parallel_for(200, [&](int it) {
        SplitMix64 rng(10'000 + it);
        int n = rng.uniform_int(3, 6);
        double span = rng.uniform(5.0, 9.0);
        int pieces = rng.uniform_int(2, 8);
        std::vector<double> ts = {0.0};
        for (int i = 1; i < pieces; ++i) ts.push_back(rng.uniform(0.1, span));
        ts = merge_times(std::move(ts), 0.05);
        std::vector<double> vs;
        for (std::size_t i = 0; i < ts.size(); ++i) vs.push_back(rng.uniform(0.5, 2.0));
        StepFunction b = StepFunction::on_grid(ts, vs);

        // A couple of distinct cost magnitudes keeps the candidate grid at
        // desk scale while exercising asymmetric arcs.
        std::vector<double> levels;
        int nlevels = rng.uniform_int(2, 3);
        for (int l = 0; l < nlevels; ++l) levels.push_back(rng.uniform(span / 3.0, span));
        std::vector<double> costs;
        for (int k = 0; k < n * (n - 1); ++k)
            costs.push_back(levels[rng.uniform_int(0, nlevels - 1)]);

        TdGraph g = generate_invariant(n, b, costs);
        CtcpResult res = check(g, std::nullopt, GridPolicy::exact(8192));
        if (res.zeta_star > res.eps_zero) {
            ck.fail("instance " + std::to_string(it) + ": zeta_star " +
                    std::to_string(res.zeta_star) + " > eps_zero");
            return;
        }
        if (n <= 5) {
            auto paths = oracles::all_simple_paths(g);
            double T = g.horizon();
            std::vector<double> d0(paths.size()), dT(paths.size());
            for (std::size_t p = 0; p < paths.size(); ++p) {
                d0[p] = path_duration(g, paths[p], 0.0);
                dT[p] = path_duration(g, paths[p], T);
            }
            for (std::size_t p = 0; p < paths.size(); ++p)
                for (std::size_t q = p + 1; q < paths.size(); ++q) {
                    if (std::fabs(d0[p] - d0[q]) <= 1e-7 || std::fabs(dT[p] - dT[q]) <= 1e-7)
                        continue;
                    if ((d0[p] < d0[q]) != (dT[p] < dT[q])) {
                        ck.fail("instance " + std::to_string(it) + ": path ordering flips");
                        return;
                    }
                }
        }
    });
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 3: lower approximation domination -----------------------

std::string criterion_domination() {
    Checker ck;
    parallel_for(100, [&](int it) {
        SplitMix64 rng(20'000 + it);
        GenSpec spec;
        spec.n = 4 + it % 7; // 4..10
        spec.pattern = it % 2 ? Pattern::B : Pattern::A;
        spec.delta = 0.65 + 0.1 * (it % 4);
        spec.seed = 20'000 + it;
        TdGraph g = generate(spec);
        CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(75));
        LowerApproxGraph la = lower_graph(g, res);
        for (const auto& [i, j] : g.arcs()) {
            double prev_arrival = -1e100;
            for (int s = 0; s <= 1000; ++s) {
                double t = g.horizon() * s / 1000.0;
                double lo = la.travel_time(i, j, t);
                if (lo > g.arc(i, j).value(t) + 1e-9) {
                    ck.fail("instance " + std::to_string(it) + ": tau_lower above tau");
                    return;
                }
                double a = t + lo;
                if (a <= prev_arrival) {
                    ck.fail("instance " + std::to_string(it) + ": tau_lower breaks FIFO");
                    return;
                }
                prev_arrival = a;
            }
        }
    });
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 4: bound validity ---------------------------------------

std::string criterion_bounds() {
    Checker ck;
    parallel_for(100, [&](int it) {
        SplitMix64 rng(30'000 + it);
        GenSpec spec;
        spec.n = 5 + it % 4; // 5..8
        spec.pattern = it % 2 ? Pattern::B : Pattern::A;
        spec.delta = 0.7 + 0.1 * (it % 3);
        spec.seed = 30'000 + it;
        TdGraph g = generate(spec);
        CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(75));
        LowerApproxGraph la = lower_graph(g, res);
        BoundPair bp = bound_pair(g, la);
        auto [opt, tour] = oracles::brute_force_tsp(g);
        if (bp.lower > opt + 1e-6)
            ck.fail("instance " + std::to_string(it) + ": lower bound above the optimum");
        if (bp.upper < opt - 1e-6)
            ck.fail("instance " + std::to_string(it) + ": upper bound below the optimum");
    });
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 5: solver exactness -------------------------------------

std::string criterion_exactness() {
    Checker ck;
    parallel_for(50, [&](int it) {
        GenSpec spec;
        spec.n = 7;
        spec.pattern = it % 2 ? Pattern::B : Pattern::A;
        spec.delta = 0.7 + 0.1 * (it % 3);
        spec.seed = 40'000 + it;
        TdGraph g = generate(spec);
        SolveReport rep = solve_tdtsp(g);
        if (rep.status != SolveStatus::Optimal) {
            ck.fail("instance " + std::to_string(it) + ": no optimum");
            return;
        }
        auto [opt, tour] = oracles::brute_force_tsp(g);
        if (std::fabs(rep.optimum - opt) > 1e-6 * opt)
            ck.fail("instance " + std::to_string(it) + ": optimum mismatch " +
                    std::to_string(rep.optimum) + " vs " + std::to_string(opt));
        if (rep.nodes < 1) ck.fail("instance " + std::to_string(it) + ": nodes < 1");
        if (rep.gap_final != 0.0) ck.fail("instance " + std::to_string(it) + ": gap_final != 0");
    });
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 6: root tightness trend at n = 15 -----------------------

std::string criterion_gap_trend() {
    Checker ck;
    const std::vector<double> deltas = {0.9, 0.8, 0.7};
    const int per_delta = 30;
    std::vector<std::vector<double>> gaps(deltas.size(), std::vector<double>(per_delta, 0.0));
    parallel_for(static_cast<int>(deltas.size()) * per_delta, [&](int idx) {
        int d = idx / per_delta;
        int i = idx % per_delta;
        GenSpec spec;
        spec.n = 15;
        spec.pattern = Pattern::B;
        spec.delta = deltas[d];
        spec.seed = 50'000 + i; // same seeds across deltas
        TdGraph g = generate(spec);
        SolveConfig cfg;
        cfg.time_limit_seconds = 60.0;
        SolveReport rep = solve_tdtsp(g, cfg);
        if (!std::isfinite(rep.gap_initial) || rep.gap_initial < 0.0) {
            ck.fail("delta " + std::to_string(deltas[d]) + " seed " + std::to_string(i) +
                    ": bad initial gap");
            return;
        }
        if (rep.status == SolveStatus::Gap) {
            // Timed out: the reported bound pair must still be valid.
            if (!(rep.lb_final > 0.0) || rep.lb_final > rep.ub_final + 1e-9) {
                ck.fail("delta " + std::to_string(deltas[d]) + " seed " + std::to_string(i) +
                        ": invalid bound pair on timeout");
                return;
            }
        }
        gaps[d][i] = rep.gap_initial;
    });
    if (!ck.failures.empty()) return ck.failures.front();
    std::vector<double> mean(deltas.size(), 0.0);
    for (std::size_t d = 0; d < deltas.size(); ++d) {
        for (double v : gaps[d]) mean[d] += v;
        mean[d] /= per_delta;
        if (!std::isfinite(mean[d])) return "non-finite mean gap";
    }
    // Weakly increasing as delta decreases: 0.9 -> 0.8 -> 0.7.
    if (mean[1] < mean[0] - 1e-12 || mean[2] < mean[1] - 1e-12) {
        std::ostringstream ss;
        ss << "gap trend broken: " << mean[0] << " (0.9) " << mean[1] << " (0.8) " << mean[2]
           << " (0.7)";
        return ss.str();
    }
    std::fprintf(stderr, "      mean GAP_I: delta 0.9 -> %.4f%%, 0.8 -> %.4f%%, 0.7 -> %.4f%%\n",
                 100 * mean[0], 100 * mean[1], 100 * mean[2]);
    return "";
}

// ---- criterion 7: LP correctness ---------------------------------------

// Same oracle as the unit suite: enumerate bases of the slack form.
double lp_enumerate(const LpProblem& p) {
    const int n = p.num_vars();
    const int m = static_cast<int>(p.rows.size());
    int nslack = 0;
    for (const auto& r : p.rows)
        if (r.rel != Relation::Equal) ++nslack;
    const int N = n + nslack;
    std::vector<std::vector<double>> A(m, std::vector<double>(N, 0.0));
    std::vector<double> b(m);
    int sc = n;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) A[i][j] = p.rows[i].coeffs[j];
        b[i] = p.rows[i].rhs;
        if (p.rows[i].rel == Relation::LessEqual) A[i][sc++] = 1.0;
        if (p.rows[i].rel == Relation::GreaterEqual) A[i][sc++] = -1.0;
    }
    double best = std::numeric_limits<double>::infinity();
    std::vector<int> cols(m);
    auto rec = [&](auto&& self, int start, int depth) -> void {
        if (depth == m) {
            std::vector<std::vector<double>> B(m, std::vector<double>(m + 1, 0.0));
            for (int i = 0; i < m; ++i) {
                for (int k = 0; k < m; ++k) B[i][k] = A[i][cols[k]];
                B[i][m] = b[i];
            }
            for (int k = 0; k < m; ++k) {
                int piv = k;
                for (int i = k + 1; i < m; ++i)
                    if (std::fabs(B[i][k]) > std::fabs(B[piv][k])) piv = i;
                if (std::fabs(B[piv][k]) < 1e-10) return;
                std::swap(B[k], B[piv]);
                for (int i = 0; i < m; ++i) {
                    if (i == k) continue;
                    double f = B[i][k] / B[k][k];
                    for (int j = k; j <= m; ++j) B[i][j] -= f * B[k][j];
                }
            }
            std::vector<double> z(N, 0.0);
            for (int k = 0; k < m; ++k) z[cols[k]] = B[k][m] / B[k][k];
            for (double v : z)
                if (v < -1e-9) return;
            double obj = 0.0;
            for (int j = 0; j < n; ++j) obj += p.objective[j] * z[j];
            best = std::min(best, obj);
            return;
        }
        for (int c = start; c < N; ++c) {
            cols[depth] = c;
            self(self, c + 1, depth + 1);
        }
    };
    rec(rec, 0, 0);
    return best;
}

std::string criterion_lp() {
    Checker ck;
    std::atomic<int> certified{0};
    parallel_for(500, [&](int it) {
        SplitMix64 rng(60'000 + it);
        int n = rng.uniform_int(2, 6);
        int m = rng.uniform_int(2, 6);
        LpProblem p;
        p.objective.resize(n);
        for (double& c : p.objective) c = rng.uniform(0.0, 2.0);
        std::vector<double> x0(n);
        for (double& v : x0) v = rng.uniform(0.0, 3.0);
        for (int i = 0; i < m; ++i) {
            LpRow r;
            r.coeffs.resize(n);
            for (double& a : r.coeffs) a = rng.uniform(-1.0, 2.0);
            double act = 0.0;
            for (int j = 0; j < n; ++j) act += r.coeffs[j] * x0[j];
            int kind = rng.uniform_int(0, 2);
            if (kind == 0) {
                r.rel = Relation::LessEqual;
                r.rhs = act + rng.uniform(0.0, 2.0);
            } else if (kind == 1) {
                r.rel = Relation::GreaterEqual;
                r.rhs = act - rng.uniform(0.0, 2.0);
            } else {
                r.rel = Relation::Equal;
                r.rhs = act;
            }
            p.rows.push_back(std::move(r));
        }
        LpSolution s = solve(p);
        if (s.status != LpStatus::Optimal) {
            ck.fail("lp " + std::to_string(it) + ": not optimal despite feasible construction");
            return;
        }
        if (!certify(p, s)) {
            ck.fail("lp " + std::to_string(it) + ": certificate failed");
            return;
        }
        certified.fetch_add(1);
        double oracle = lp_enumerate(p);
        if (!(std::fabs(s.objective - oracle) <= 1e-7 * std::max(1.0, std::fabs(oracle))))
            ck.fail("lp " + std::to_string(it) + ": enumeration mismatch");
    });
    if (certified.load() != 500 && ck.failures.empty()) return "not all 500 LPs certified";
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 8: assignment / ATSP exactness --------------------------

std::string criterion_atsp() {
    Checker ck;
    parallel_for(200, [&](int it) {
        SplitMix64 rng(70'000 + it);
        int n = rng.uniform_int(3, 7);
        std::vector<std::vector<double>> rows(n, std::vector<double>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) rows[i][j] = i == j ? 0.0 : rng.uniform(1.0, 9.0);
        CostMatrix m = CostMatrix::from_rows(rows);
        m.forbid_diagonal();

        AssignmentResult ap = solve_assignment(m);
        std::vector<std::vector<double>> diag_blocked = rows;
        for (int i = 0; i < n; ++i) diag_blocked[i][i] = 1e6;
        if (std::fabs(ap.cost - oracles::brute_force_assignment(diag_blocked)) > 1e-9)
            ck.fail("assignment " + std::to_string(it) + ": mismatch");

        AtspResult tour = solve_atsp(m);
        if (!tour.feasible || std::fabs(tour.cost - oracles::brute_force_atsp(rows)) > 1e-9)
            ck.fail("atsp " + std::to_string(it) + ": mismatch");

        // Forced / forbidden variants against the filtered brute force.
        int a = rng.uniform_int(1, n - 1);
        AtspConstraints forced;
        forced.forced = {{0, a}};
        AtspResult rf = solve_atsp(m, forced);
        double of = oracles::brute_force_atsp(rows, [&](const std::vector<int>& t) {
            return t[1] == a; // depot-rooted tours
        });
        if (!rf.feasible || std::fabs(rf.cost - of) > 1e-9)
            ck.fail("atsp-forced " + std::to_string(it) + ": mismatch");

        int b = rng.uniform_int(1, n - 1);
        AtspConstraints forb;
        forb.forbidden = {{0, b}};
        AtspResult rb = solve_atsp(m, forb);
        double ob = oracles::brute_force_atsp(rows, [&](const std::vector<int>& t) {
            return t[1] != b;
        });
        if (n == 2) return; // forbidding the single out-arc kills every tour
        if (!rb.feasible || std::fabs(rb.cost - ob) > 1e-9)
            ck.fail("atsp-forbidden " + std::to_string(it) + ": mismatch");
    });
    return ck.failures.empty() ? "" : ck.failures.front();
}

// ---- criterion 9: determinism through the CLI --------------------------

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

int run_cli(const std::string& args, const std::string& out_path) {
    std::string cmd = std::string(TDROUTE_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    return std::system(cmd.c_str());
}

std::string criterion_determinism() {
    const std::string base = "/tmp/tdroute_accept9";
    for (int run = 0; run < 2; ++run) {
        std::string tag = base + "_" + std::to_string(run);
        if (run_cli("gen --n 10 --pattern B --delta 0.8 --periods 6 --seed 123 --out " + tag +
                        ".td",
                    tag + "_gen.txt") != 0)
            return "gen run failed";
        if (run_cli("solve " + tag + ".td --no-timing", tag + "_solve.txt") != 0)
            return "solve run failed";
    }
    if (slurp(base + "_0.td") != slurp(base + "_1.td")) return "instance files differ";
    if (slurp(base + "_0.td").empty()) return "instance file empty";
    if (slurp(base + "_0_solve.txt") != slurp(base + "_1_solve.txt"))
        return "timing-stripped solver reports differ";
    return "";
}

} // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<std::string()> fn;
    };
    const std::vector<Criterion> criteria = {
        {"1 figure-1 reconstruction", criterion_figure1},
        {"2 yes-instance soundness (200 generated graphs)", criterion_yes_instances},
        {"3 lower-approximation domination (100 instances)", criterion_domination},
        {"4 bound validity vs brute force (100 instances)", criterion_bounds},
        {"5 solver exactness at n=7 (50 instances)", criterion_exactness},
        {"6 root gap trend at n=15 (90 instances)", criterion_gap_trend},
        {"7 LP certificates and enumeration (500 LPs)", criterion_lp},
        {"8 assignment/ATSP exactness (200 matrices)", criterion_atsp},
        {"9 determinism through the CLI", criterion_determinism},
    };

    int failed = 0;
    for (const auto& c : criteria) {
        auto t0 = std::chrono::steady_clock::now();
        std::string err = c.fn();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (err.empty()) {
            std::printf("[PASS] criterion %s (%.2f s)\n", c.name, secs);
        } else {
            std::printf("[FAIL] criterion %s (%.2f s): %s\n", c.name, secs, err.c_str());
            ++failed;
        }
        std::fflush(stdout);
    }
    if (failed) {
        std::printf("%d criterion(s) failed\n", failed);
        return 1;
    }
    std::printf("all criteria passed\n");
    return 0;
}
