#include <benchmark/benchmark.h>

#include "tdroute/bnb.hpp"
#include "tdroute/bounds.hpp"
#include "tdroute/ctcp.hpp"
#include "tdroute/instgen.hpp"
#include "tdroute/omega.hpp"
#include "tdroute/rng.hpp"

using namespace tdroute;

namespace {

TdGraph pattern_instance(int n, std::uint64_t seed) {
    GenSpec spec;
    spec.n = n;
    spec.pattern = Pattern::B;
    spec.delta = 0.8;
    spec.seed = seed;
    return generate(spec);
}

void BM_TravelCost(benchmark::State& state) {
    PwlFunction tau{{0, 2}, {4, 2}, {5, 3}};
    StepFunction b = StepFunction::on_grid({0, 1, 2, 3, 4, 5}, {2, 1, 2, 1, 2, 1});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(travel_cost(tau, b, t));
        t += 0.01;
        if (t > 5.0) t = 0.0;
    }
}
BENCHMARK(BM_TravelCost);

void BM_IgpTravelTime(benchmark::State& state) {
    StepFunction b = StepFunction::on_grid({0, 1, 2, 3, 4, 5}, {2, 1, 2, 1, 2, 1});
    double t = 0.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(igp_travel_time(b, 3.0, t));
        t += 0.01;
        if (t > 5.0) t = 0.0;
    }
}
BENCHMARK(BM_IgpTravelTime);

void BM_BuildOmega(benchmark::State& state) {
    TdGraph g = pattern_instance(static_cast<int>(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(build_omega(g));
}
BENCHMARK(BM_BuildOmega)->Arg(5)->Arg(8);

void BM_CtcpCheckReduced(benchmark::State& state) {
    TdGraph g = pattern_instance(static_cast<int>(state.range(0)), 11);
    for (auto _ : state) {
        CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(75));
        benchmark::DoNotOptimize(res.zeta_star);
    }
}
BENCHMARK(BM_CtcpCheckReduced)->Arg(8)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_Assignment(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(3);
    CostMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = rng.uniform(1.0, 9.0);
    m.refresh_sentinel();
    m.forbid_diagonal();
    for (auto _ : state) benchmark::DoNotOptimize(solve_assignment(m));
}
BENCHMARK(BM_Assignment)->Arg(10)->Arg(30);

void BM_Atsp(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    SplitMix64 rng(5);
    CostMatrix m(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m.at(i, j) = rng.uniform(1.0, 9.0);
    m.refresh_sentinel();
    m.forbid_diagonal();
    AtspOptions opts;
    opts.lexicographic = false;
    for (auto _ : state) benchmark::DoNotOptimize(solve_atsp(m, {}, opts));
}
BENCHMARK(BM_Atsp)->Arg(10)->Arg(15);

void BM_SolveTdtsp(benchmark::State& state) {
    TdGraph g = pattern_instance(static_cast<int>(state.range(0)), 13);
    for (auto _ : state) {
        SolveReport rep = solve_tdtsp(g);
        benchmark::DoNotOptimize(rep.optimum);
    }
}
BENCHMARK(BM_SolveTdtsp)->Arg(8)->Arg(10)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
