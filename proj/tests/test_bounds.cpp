#include "doctest.h"
#include "oracles.hpp"
#include "tdroute/bounds.hpp"
#include "tdroute/instgen.hpp"

#include <cmath>
#include <sstream>

using namespace tdroute;

namespace {
TdGraph desk_graph() {
    TdGraph g(2, 5.0);
    g.add_arc(0, 1, PwlFunction{{0, 2}, {4, 2}, {5, 3}});
    return g;
}

std::vector<double> uniform_costs(int n, double c) {
    return std::vector<double>(static_cast<std::size_t>(n) * (n - 1), c);
}
} // namespace

TEST_CASE("igp travel time worked examples") {
    CHECK(igp_travel_time(StepFunction::constant(1.0), 3.0, 0.0) == doctest::Approx(3.0));
    StepFunction grid = StepFunction::on_grid({0, 1, 2, 3, 4, 5}, {2, 1, 2, 1, 2, 1});
    // Two cost units at rate 2 on [4,5), one more at the persisted rate 1.
    CHECK(igp_travel_time(grid, 3.0, 4.0) == doctest::Approx(2.0));
    StepFunction two{{0, 1}, {2, 2}};
    CHECK(igp_travel_time(two, 3.0, 0.0) == doctest::Approx(2.5));
}

TEST_CASE("igp satisfies its defining integral") {
    SplitMix64 rng(501);
    for (int it = 0; it < 100; ++it) {
        StepFunction b = oracles::random_step(rng, 10.0);
        double c = rng.uniform(0.3, 8.0);
        double t = rng.uniform(-1.0, 11.0);
        double d = igp_travel_time(b, c, t);
        CHECK(d > 0.0);
        CHECK(b.integral(t, t + d) == doctest::Approx(c).epsilon(1e-9));
        // Backward counterpart inverts the forward pass.
        CHECK(igp_departure(b, c, t + d) == doctest::Approx(t).epsilon(1e-9));
    }
}

TEST_CASE("materialized igp function matches pointwise evaluation") {
    SplitMix64 rng(503);
    for (int it = 0; it < 50; ++it) {
        StepFunction b = oracles::random_step(rng, 10.0);
        double c = rng.uniform(0.5, 6.0);
        PwlFunction f = materialize_igp(b, c, 0.0, 10.0);
        CHECK(f.is_fifo());
        for (int s = 0; s <= 100; ++s) {
            double t = 10.0 * s / 100.0;
            CHECK(f.value(t) == doctest::Approx(igp_travel_time(b, c, t)).epsilon(1e-9));
        }
    }
}

TEST_CASE("lower graph of a yes-instance reproduces the travel times") {
    TdGraph g = desk_graph();
    CtcpResult res = check(g, std::nullopt, GridPolicy::exact());
    LowerApproxGraph la = lower_graph(g, res);
    CHECK(la.c_underbar.at({0, 1}) == doctest::Approx(3.0).epsilon(1e-7));
    for (int s = 0; s <= 100; ++s) {
        double t = 5.0 * s / 100.0;
        CHECK(la.travel_time(0, 1, t) ==
              doctest::Approx(g.arc(0, 1).value(t)).epsilon(1e-6));
    }
}

TEST_CASE("lower graph of a constant instance is exact") {
    TdGraph g(3, 6.0);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) g.add_arc(i, j, PwlFunction::constant(2.0));
    CtcpResult res = check(g, std::nullopt, GridPolicy::exact());
    LowerApproxGraph la = lower_graph(g, res);
    for (const auto& [i, j] : g.arcs())
        for (int s = 0; s <= 50; ++s)
            CHECK(la.travel_time(i, j, 6.0 * s / 50.0) == doctest::Approx(2.0).epsilon(1e-7));
}

TEST_CASE("non-invariant instances fit strictly below somewhere") {
    TdGraph g(3, 4.0);
    g.add_arc(0, 1, PwlFunction::constant(1.0));
    g.add_arc(1, 2, PwlFunction{{0, 1}, {2, 3}});
    CtcpResult res = check(g, std::nullopt, GridPolicy::exact());
    REQUIRE_FALSE(res.is_invariant);
    LowerApproxGraph la = lower_graph(g, res);
    double worst_gap = 0.0;
    for (const auto& [i, j] : g.arcs())
        for (int s = 0; s <= 200; ++s) {
            double t = 4.0 * s / 200.0;
            double gap = g.arc(i, j).value(t) - la.travel_time(i, j, t);
            CHECK(gap >= -1e-9); // never above the original
            worst_gap = std::max(worst_gap, gap);
        }
    CHECK(worst_gap > 1e-6);
}

TEST_CASE("pointwise domination and FIFO hold on generated instances") {
    SplitMix64 rng(509);
    for (int it = 0; it < 5; ++it) {
        GenSpec spec;
        spec.n = 5;
        spec.pattern = it % 2 ? Pattern::B : Pattern::A;
        spec.delta = 0.8;
        spec.seed = 600 + it;
        TdGraph g = generate(spec);
        CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(40));
        LowerApproxGraph la = lower_graph(g, res);
        for (const auto& [i, j] : g.arcs()) {
            double prev_arrival = -1e100;
            for (int s = 0; s <= 100; ++s) {
                double t = g.horizon() * s / 100.0;
                double lo = la.travel_time(i, j, t);
                CHECK(lo <= g.arc(i, j).value(t) + 1e-9);
                double a = t + lo;
                CHECK(a > prev_arrival);
                prev_arrival = a;
            }
        }
    }
}

TEST_CASE("bound pair brackets the brute force optimum") {
    SplitMix64 rng(521);
    for (int it = 0; it < 6; ++it) {
        GenSpec spec;
        spec.n = 6;
        spec.pattern = Pattern::B;
        spec.delta = 0.75;
        spec.seed = 6100 + it;
        TdGraph g = generate(spec);
        CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(40));
        LowerApproxGraph la = lower_graph(g, res);
        BoundPair bp = bound_pair(g, la);
        auto [opt, tour] = oracles::brute_force_tsp(g);
        CHECK(bp.lower <= opt + 1e-6);
        CHECK(bp.upper >= opt - 1e-6);
        CHECK(bp.lower <= bp.upper + 1e-9);
    }
}

TEST_CASE("bound pair is tight on invariant and constant instances") {
    StepFunction b{{0, 1}, {3, 2}, {7, 1.5}};
    SplitMix64 rng(523);
    std::vector<double> costs;
    for (int k = 0; k < 4 * 3; ++k) costs.push_back(rng.uniform(2.0, 6.0));
    TdGraph g = generate_invariant(4, b, costs);
    CtcpResult res = check(g, std::nullopt, GridPolicy::exact(4096));
    REQUIRE(res.is_invariant);
    LowerApproxGraph la = lower_graph(g, res);
    BoundPair bp = bound_pair(g, la);
    auto [opt, tour] = oracles::brute_force_tsp(g);
    CHECK(bp.lower == doctest::Approx(opt).epsilon(1e-6));
    CHECK(bp.upper == doctest::Approx(opt).epsilon(1e-6));

    TdGraph cg(4, 8.0);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) cg.add_arc(i, j, PwlFunction::constant(1.0 + 0.1 * (i + 2 * j)));
    CtcpResult cres = check(cg, std::nullopt, GridPolicy::exact(4096));
    LowerApproxGraph cla = lower_graph(cg, cres);
    BoundPair cbp = bound_pair(cg, cla);
    auto [copt, ctour] = oracles::brute_force_tsp(cg);
    CHECK(cbp.lower == doctest::Approx(copt).epsilon(1e-6));
    CHECK(cbp.upper == doctest::Approx(copt).epsilon(1e-6));
}

TEST_CASE("generate_invariant worked examples") {
    TdGraph unit = generate_invariant(3, StepFunction::constant(1.0), uniform_costs(3, 1.0));
    for (const auto& [i, j] : unit.arcs())
        for (int s = 0; s <= 20; ++s)
            CHECK(unit.arc(i, j).value(s * 0.05) == doctest::Approx(1.0));

    StepFunction b{{0, 1}, {5, 2}};
    TdGraph g = generate_invariant(3, b, uniform_costs(3, 4.0));
    CHECK(g.arc(0, 1).value(0.0) == doctest::Approx(4.0));
    // From 4: one cost unit at rate 1 reaches 5, the remaining three at rate 2.
    CHECK(g.arc(0, 1).value(4.0) == doctest::Approx(2.5));
}

TEST_CASE("generate_invariant outputs are yes-instances") {
    SplitMix64 rng(541);
    for (int it = 0; it < 5; ++it) {
        int n = rng.uniform_int(3, 4);
        StepFunction b = oracles::random_step(rng, 8.0, 5);
        std::vector<double> costs;
        double base = rng.uniform(3.0, 5.0);
        for (int k = 0; k < n * (n - 1); ++k)
            costs.push_back(base * (1.0 + 0.5 * rng.uniform_int(0, 2)));
        TdGraph g = generate_invariant(n, b, costs);
        CtcpResult res = check(g, std::nullopt, GridPolicy::exact(4096));
        CHECK(res.zeta_star <= res.eps_zero);
    }
}

TEST_CASE("cost ordering equals duration ordering on the auxiliary graph") {
    SplitMix64 rng(547);
    GenSpec spec;
    spec.n = 5;
    spec.pattern = Pattern::B;
    spec.delta = 0.8;
    spec.seed = 999;
    TdGraph g = generate(spec);
    CtcpResult res = check(g, std::nullopt, GridPolicy::reduced(40));
    LowerApproxGraph la = lower_graph(g, res);
    for (int it = 0; it < 40; ++it) {
        std::vector<int> pa = {0, 1, 2, 3, 4}, pb = {0, 1, 2, 3, 4};
        for (int s = 0; s < 4; ++s) {
            std::swap(pa[1 + rng.uniform_int(0, 3)], pa[1 + rng.uniform_int(0, 3)]);
            std::swap(pb[1 + rng.uniform_int(0, 3)], pb[1 + rng.uniform_int(0, 3)]);
        }
        auto tour_cost = [&](const std::vector<int>& t) {
            double c = 0.0;
            for (std::size_t i = 0; i < t.size(); ++i)
                c += la.c_underbar.at({t[i], t[(i + 1) % t.size()]});
            return c;
        };
        auto tour_dur = [&](std::vector<int> t) {
            t.push_back(t.front());
            return la.path_duration(t, g.start_time());
        };
        double ca = tour_cost(pa), cb = tour_cost(pb);
        double da = tour_dur(pa), db = tour_dur(pb);
        if (std::fabs(ca - cb) > 1e-9) CHECK((ca < cb) == (da < db + 1e-12));
    }
}

TEST_CASE("plot csv is well formed") {
    TdGraph g = desk_graph();
    CtcpResult res = check(g, std::nullopt, GridPolicy::exact());
    LowerApproxGraph la = lower_graph(g, res);
    std::ostringstream ss;
    write_plot_csv(g, la, res, ss, 10);
    std::string s = ss.str();
    CHECK(s.find("i,j,t,tau,tau_lower,cost") == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 1 + 11);
}
