// Command line front end: generate benchmark instances, decide path ranking
// invariance, compute bound pairs, run the exact solver, and batch-bench
// with CSV reporting.

#include "CLI11.hpp"

#include "tdroute/bnb.hpp"
#include "tdroute/bounds.hpp"
#include "tdroute/ctcp.hpp"
#include "tdroute/instgen.hpp"

#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <thread>

namespace {

constexpr int kExitInvariantNo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct GridFlags {
    std::string grid = "reduced";
    int k = 75;
    int cap = 512;
    double rho = 0.0; // 0 means default

    tdroute::GridPolicy policy() const {
        if (grid == "exact") return tdroute::GridPolicy::exact(cap);
        return tdroute::GridPolicy::reduced(k);
    }
    std::optional<double> rho_opt() const {
        return rho > 0.0 ? std::optional<double>(rho) : std::nullopt;
    }
};

void add_grid_flags(CLI::App* cmd, GridFlags& gf) {
    cmd->add_option("--grid", gf.grid, "Grid policy: exact or reduced")
        ->check(CLI::IsMember({"exact", "reduced"}))
        ->capture_default_str();
    cmd->add_option("--k", gf.k, "Reduced grid size (time instants)")
        ->check(CLI::Range(2, 100000))
        ->capture_default_str();
    cmd->add_option("--cap", gf.cap, "Exact grid size cap before falling back to reduced")
        ->capture_default_str();
    cmd->add_option("--rho", gf.rho, "Unit cost floor (default: 1 / min grid interval)");
}

int bench_threads() {
    if (const char* env = std::getenv("TDROUTE_THREADS")) {
        int v = std::atoi(env);
        if (v >= 1) return std::min(v, 64);
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(std::min(hw, 8u)) : 1;
}

tdroute::Pattern parse_pattern(const std::string& s) {
    return s == "B" ? tdroute::Pattern::B : tdroute::Pattern::A;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-dependent routing toolkit"};
    app.require_subcommand(1);

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a TDTSP benchmark instance");
    tdroute::GenSpec spec;
    std::string pattern_str = "A";
    std::string gen_out;
    gen->add_option("--n", spec.n, "Vertex count")->required()->check(CLI::Range(2, 10000));
    gen->add_option("--pattern", pattern_str, "Traffic pattern: A or B")
        ->check(CLI::IsMember({"A", "B"}));
    gen->add_option("--delta", spec.delta, "Worst congestion degradation, in (0, 1]")
        ->check(CLI::Range(1e-9, 1.0));
    gen->add_option("--periods", spec.periods, "Number of speed periods")->check(CLI::Range(2, 1000));
    gen->add_option("--horizon", spec.horizon, "Planning horizon T")->capture_default_str();
    gen->add_option("--seed", spec.seed, "Generator seed")->capture_default_str();
    gen->add_option("--out", gen_out, "Output instance path")->required();

    // check
    auto* chk = app.add_subcommand("check", "Decide path ranking invariance (CTCP)");
    std::string chk_instance;
    GridFlags chk_grid;
    chk_grid.grid = "exact";
    chk->add_option("instance", chk_instance, "Instance file")->required();
    add_grid_flags(chk, chk_grid);

    // bound
    auto* bnd = app.add_subcommand("bound", "Compute the LP-based bound pair");
    std::string bnd_instance, bnd_plot;
    GridFlags bnd_grid;
    bnd->add_option("instance", bnd_instance, "Instance file")->required();
    add_grid_flags(bnd, bnd_grid);
    bnd->add_option("--plot-csv", bnd_plot, "Write per-arc (t, tau, tau_lower, cost) samples");

    // solve
    auto* slv = app.add_subcommand("solve", "Exact TDTSP branch-and-bound");
    std::string slv_instance;
    GridFlags slv_grid;
    double slv_limit = 0.0;
    bool slv_csv = false, slv_no_timing = false;
    slv->add_option("instance", slv_instance, "Instance file")->required();
    add_grid_flags(slv, slv_grid);
    slv->add_option("--time-limit", slv_limit, "Time limit in seconds (0 = none)");
    slv->add_flag("--csv", slv_csv, "Emit a CSV row instead of key=value lines");
    slv->add_flag("--no-timing", slv_no_timing, "Strip wall-clock fields from the output");

    // bench
    auto* ben = app.add_subcommand("bench", "Solve a batch and emit CSV rows");
    std::vector<std::string> ben_files;
    GridFlags ben_grid;
    tdroute::GenSpec ben_spec;
    std::string ben_pattern = "A";
    int ben_seeds = 0;
    double ben_limit = 0.0;
    bool ben_no_timing = false;
    std::string ben_out;
    ben->add_option("instances", ben_files, "Instance files to solve");
    add_grid_flags(ben, ben_grid);
    ben->add_option("--n", ben_spec.n, "Generated instances: vertex count");
    ben->add_option("--pattern", ben_pattern, "Generated instances: pattern")
        ->check(CLI::IsMember({"A", "B"}));
    ben->add_option("--delta", ben_spec.delta, "Generated instances: delta")
        ->check(CLI::Range(1e-9, 1.0));
    ben->add_option("--periods", ben_spec.periods, "Generated instances: periods");
    ben->add_option("--horizon", ben_spec.horizon, "Generated instances: horizon");
    ben->add_option("--seeds", ben_seeds, "Generate this many instances with seeds 1..S");
    ben->add_option("--time-limit", ben_limit, "Per-instance time limit in seconds (0 = none)");
    ben->add_flag("--no-timing", ben_no_timing, "Strip wall-clock fields from the output");
    ben->add_option("--out", ben_out, "Write the CSV to this file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            spec.pattern = parse_pattern(pattern_str);
            spec.validate();
            tdroute::TdGraph g = tdroute::generate(spec);
            tdroute::write_instance_file(g, gen_out);
            std::cout << tdroute::manifest_header() << "\n"
                      << tdroute::manifest_row(gen_out, spec) << "\n";
            return 0;
        }

        if (chk->parsed()) {
            tdroute::TdGraph g = tdroute::read_instance_file(chk_instance);
            tdroute::CtcpResult res = tdroute::check(g, chk_grid.rho_opt(), chk_grid.policy());
            res.write_kv(std::cout);
            return res.is_invariant ? 0 : kExitInvariantNo;
        }

        if (bnd->parsed()) {
            tdroute::TdGraph g = tdroute::read_instance_file(bnd_instance);
            tdroute::CtcpResult res = tdroute::check(g, bnd_grid.rho_opt(), bnd_grid.policy());
            tdroute::LowerApproxGraph la = tdroute::lower_graph(g, res);
            tdroute::BoundPair bp = tdroute::bound_pair(g, la);
            std::cout << "LB=" << bp.lower << "\n";
            std::cout << "UB=" << bp.upper << "\n";
            std::cout << "GAP_I=" << (bp.lower > 0 ? 100.0 * (bp.upper - bp.lower) / bp.lower : 0.0)
                      << "\n";
            if (!bnd_plot.empty()) {
                std::ofstream out(bnd_plot);
                if (!out) throw std::runtime_error("cannot open " + bnd_plot);
                tdroute::write_plot_csv(g, la, res, out);
            }
            return 0;
        }

        if (slv->parsed()) {
            tdroute::TdGraph g = tdroute::read_instance_file(slv_instance);
            tdroute::SolveConfig cfg;
            cfg.grid = slv_grid.policy();
            cfg.rho = slv_grid.rho_opt();
            if (slv_limit > 0.0) cfg.time_limit_seconds = slv_limit;
            tdroute::SolveReport rep = tdroute::solve_tdtsp(g, cfg);
            if (slv_csv) {
                std::cout << tdroute::SolveReport::csv_header() << "\n"
                          << rep.csv_row(slv_instance, !slv_no_timing) << "\n";
            } else {
                rep.write_kv(std::cout, !slv_no_timing);
            }
            return 0;
        }

        // bench
        struct Job {
            std::string name;
            tdroute::TdGraph graph;
        };
        std::vector<Job> jobs;
        for (const auto& f : ben_files) jobs.push_back({f, tdroute::read_instance_file(f)});
        ben_spec.pattern = parse_pattern(ben_pattern);
        for (int s = 1; s <= ben_seeds; ++s) {
            tdroute::GenSpec one = ben_spec;
            one.seed = static_cast<std::uint64_t>(s);
            one.validate();
            jobs.push_back({"gen-seed-" + std::to_string(s), tdroute::generate(one)});
        }
        if (jobs.empty()) {
            std::cerr << "bench: no instances (pass files or --seeds)\n";
            return kExitUsage;
        }

        tdroute::SolveConfig cfg;
        cfg.grid = ben_grid.policy();
        cfg.rho = ben_grid.rho_opt();
        if (ben_limit > 0.0) cfg.time_limit_seconds = ben_limit;

        std::vector<tdroute::SolveReport> reports(jobs.size());
        std::atomic<std::size_t> next{0};
        auto worker = [&] {
            while (true) {
                std::size_t i = next.fetch_add(1);
                if (i >= jobs.size()) return;
                reports[i] = tdroute::solve_tdtsp(jobs[i].graph, cfg);
            }
        };
        int nthreads = std::min<int>(bench_threads(), static_cast<int>(jobs.size()));
        std::vector<std::thread> pool;
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();

        std::ostream* os = &std::cout;
        std::ofstream file_out;
        if (!ben_out.empty()) {
            file_out.open(ben_out);
            if (!file_out) throw std::runtime_error("cannot open " + ben_out);
            os = &file_out;
        }
        *os << tdroute::SolveReport::csv_header() << "\n";
        long opt_count = 0, node_sum = 0;
        double gi_sum = 0.0, gf_sum = 0.0, time_sum = 0.0, ratio_sum = 0.0;
        for (std::size_t i = 0; i < jobs.size(); ++i) {
            const auto& r = reports[i];
            *os << r.csv_row(jobs[i].name, !ben_no_timing) << "\n";
            opt_count += r.status == tdroute::SolveStatus::Optimal ? 1 : 0;
            node_sum += r.nodes;
            gi_sum += r.gap_initial;
            gf_sum += r.gap_final;
            time_sum += r.wall_seconds;
            ratio_sum += r.lb_final > 0 ? r.ub_initial / r.lb_final : 0.0;
        }
        double m = static_cast<double>(jobs.size());
        *os << "AVG," << opt_count << "," << ratio_sum / m << "," << 100.0 * gi_sum / m << ","
            << 100.0 * gf_sum / m << "," << node_sum / jobs.size() << ",";
        if (ben_no_timing)
            *os << "-\n";
        else
            *os << time_sum / m << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
}
