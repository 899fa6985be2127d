#include "tdroute/omega.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tdroute {

TimeSequence time_sequence(const PwlFunction& tau, double T, double t, Arc arc) {
    if (t < -kEpsTime || t > T + kEpsTime)
        throw std::invalid_argument("time_sequence: seed outside [0, T]");
    std::vector<double> times = {t};
    // Strictly positive travel times advance by at least tau_min per step,
    // so both loops terminate; the membership guard only protects against
    // degenerate fixed points.
    double cur = t;
    while (true) {
        double a = arrival(tau, cur);
        if (a > T + kEpsTime || std::fabs(a - cur) <= kEpsTime) break;
        times.push_back(std::min(a, T));
        cur = a;
    }
    cur = t;
    while (true) {
        double d = arrival_inverse(tau, cur);
        if (d < -kEpsTime || std::fabs(d - cur) <= kEpsTime) break;
        times.push_back(std::max(d, 0.0));
        cur = d;
    }
    return {arc, merge_times(std::move(times))};
}

OmegaSets build_omega(const TdGraph& g) {
    OmegaSets out;
    if (g.num_arcs() == 0) throw std::invalid_argument("build_omega: graph has no arcs");
    std::vector<double> seeds = g.all_breakpoints();
    if (seeds.empty()) seeds.push_back(0.0);
    for (const auto& a : g.arcs()) {
        std::vector<double> ts;
        for (double s : seeds) {
            auto seq = time_sequence(g.arc(a.first, a.second), g.horizon(), s, a);
            ts.insert(ts.end(), seq.times.begin(), seq.times.end());
        }
        out.per_arc[a] = merge_times(std::move(ts));
    }
    // Intersection keeps the representative from the lexicographically first
    // arc; exact float equality across arcs would be fragile.
    auto contains = [](const std::vector<double>& v, double t) {
        auto it = std::lower_bound(v.begin(), v.end(), t - kEpsTime);
        return it != v.end() && std::fabs(*it - t) <= kEpsTime;
    };
    const auto& first = out.per_arc.begin()->second;
    for (double t : first) {
        bool in_all = true;
        for (auto it = std::next(out.per_arc.begin()); in_all && it != out.per_arc.end(); ++it)
            in_all = contains(it->second, t);
        if (in_all) out.global.push_back(t);
    }
    return out;
}

bool size_bound_check(const TdGraph& g, const OmegaSets& omega) {
    double tau_min = g.min_travel_time();
    double bound = g.num_arcs() * static_cast<double>(g.all_breakpoints().size()) *
                   (g.horizon() / tau_min);
    for (const auto& [arc, ts] : omega.per_arc)
        if (static_cast<double>(ts.size()) > bound + kEpsTime) return false;
    return true;
}

} // namespace tdroute
