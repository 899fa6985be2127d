#include "tdroute/pwl.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace tdroute {

namespace {

bool strictly_increasing(const std::vector<double>& ts) {
    for (std::size_t i = 1; i < ts.size(); ++i)
        if (!(ts[i] > ts[i - 1])) return false;
    return true;
}

} // namespace

PwlFunction::PwlFunction(std::vector<Breakpoint> points) : points_(std::move(points)) {
    if (points_.empty())
        throw std::invalid_argument("PwlFunction: needs at least one breakpoint");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        if (!std::isfinite(points_[i].t) || !std::isfinite(points_[i].v))
            throw std::invalid_argument("PwlFunction: non-finite breakpoint");
        if (i > 0 && !(points_[i].t > points_[i - 1].t))
            throw std::invalid_argument("PwlFunction: breakpoint times must be strictly increasing");
    }
    fifo_ = true;
    for (const auto& p : points_)
        if (!(p.v > 0.0)) fifo_ = false;
    for (std::size_t i = 1; fifo_ && i < points_.size(); ++i) {
        double slope = (points_[i].v - points_[i - 1].v) / (points_[i].t - points_[i - 1].t);
        if (!(slope > -1.0)) fifo_ = false;
    }
}

PwlFunction::PwlFunction(std::initializer_list<Breakpoint> points)
    : PwlFunction(std::vector<Breakpoint>(points)) {}

PwlFunction PwlFunction::constant(double value, double at) {
    return PwlFunction({{at, value}});
}

double PwlFunction::value(double t) const {
    if (t <= points_.front().t) return points_.front().v;
    if (t >= points_.back().t) return points_.back().v;
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double x, const Breakpoint& p) { return x < p.t; });
    const Breakpoint& hi = *it;
    const Breakpoint& lo = *(it - 1);
    double w = (t - lo.t) / (hi.t - lo.t);
    return lo.v + w * (hi.v - lo.v);
}

double PwlFunction::min_value() const {
    double m = points_.front().v;
    for (const auto& p : points_) m = std::min(m, p.v);
    return m;
}

double PwlFunction::max_value() const {
    double m = points_.front().v;
    for (const auto& p : points_) m = std::max(m, p.v);
    return m;
}

double PwlFunction::min_on(double lo, double hi) const {
    if (!(lo <= hi)) throw std::invalid_argument("PwlFunction::min_on: lo > hi");
    double m = std::min(value(lo), value(hi));
    for (const auto& p : points_)
        if (p.t > lo && p.t < hi) m = std::min(m, p.v);
    return m;
}

std::vector<double> PwlFunction::breakpoint_times() const {
    std::vector<double> ts;
    ts.reserve(points_.size());
    for (const auto& p : points_) ts.push_back(p.t);
    return ts;
}

double PwlFunction::integral(double a, double b) const {
    if (!(a <= b)) throw std::invalid_argument("PwlFunction::integral: a > b");
    // Trapezoid over the breakpoint grid clipped to [a, b]; the clamped
    // extension contributes flat pieces.
    double total = 0.0;
    auto segment = [&](double lo, double hi) {
        if (hi <= lo) return;
        total += 0.5 * (value(lo) + value(hi)) * (hi - lo);
    };
    double lo = a;
    for (const auto& p : points_) {
        if (p.t <= a) continue;
        if (p.t >= b) break;
        segment(lo, p.t);
        lo = p.t;
    }
    segment(lo, b);
    return total;
}

PwlFunction PwlFunction::simplified(double eps_time) const {
    std::vector<Breakpoint> out;
    out.push_back(points_.front());
    for (std::size_t i = 1; i < points_.size(); ++i) {
        if (points_[i].t - out.back().t <= eps_time) continue;
        out.push_back(points_[i]);
    }
    // Drop interior points collinear with their neighbours.
    std::vector<Breakpoint> trimmed;
    trimmed.push_back(out.front());
    for (std::size_t i = 1; i + 1 < out.size(); ++i) {
        const auto& a = trimmed.back();
        const auto& b = out[i];
        const auto& c = out[i + 1];
        double lerp = a.v + (b.t - a.t) / (c.t - a.t) * (c.v - a.v);
        if (std::fabs(lerp - b.v) <= kEpsCost) continue;
        trimmed.push_back(b);
    }
    if (out.size() > 1) trimmed.push_back(out.back());
    return PwlFunction(std::move(trimmed));
}

std::ostream& operator<<(std::ostream& os, const PwlFunction& f) {
    os << "pwl[";
    for (std::size_t i = 0; i < f.points().size(); ++i) {
        if (i) os << " ";
        os << "(" << f.points()[i].t << "," << f.points()[i].v << ")";
    }
    return os << "]";
}

StepFunction::StepFunction(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty())
        throw std::invalid_argument("StepFunction: needs at least one piece");
    std::vector<double> ts;
    ts.reserve(pieces_.size());
    for (const auto& p : pieces_) {
        if (!std::isfinite(p.t) || !std::isfinite(p.v))
            throw std::invalid_argument("StepFunction: non-finite piece");
        if (!(p.v > 0.0))
            throw std::invalid_argument("StepFunction: values must be strictly positive");
        ts.push_back(p.t);
    }
    if (!strictly_increasing(ts))
        throw std::invalid_argument("StepFunction: piece times must be strictly increasing");
}

StepFunction::StepFunction(std::initializer_list<Piece> pieces)
    : StepFunction(std::vector<Piece>(pieces)) {}

StepFunction StepFunction::constant(double value, double at) {
    return StepFunction({{at, value}});
}

StepFunction StepFunction::on_grid(const std::vector<double>& times,
                                   const std::vector<double>& values) {
    if (times.size() != values.size())
        throw std::invalid_argument("StepFunction::on_grid: size mismatch");
    std::vector<Piece> ps;
    ps.reserve(times.size());
    for (std::size_t i = 0; i < times.size(); ++i) ps.push_back({times[i], values[i]});
    return StepFunction(std::move(ps));
}

double StepFunction::value(double t) const {
    if (t <= pieces_.front().t) return pieces_.front().v;
    auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                               [](double x, const Piece& p) { return x < p.t; });
    return (it - 1)->v;
}

std::vector<double> StepFunction::breakpoint_times() const {
    std::vector<double> ts;
    ts.reserve(pieces_.size());
    for (const auto& p : pieces_) ts.push_back(p.t);
    return ts;
}

double StepFunction::integral(double a, double b) const {
    if (!(a <= b)) throw std::invalid_argument("StepFunction::integral: a > b");
    double total = 0.0;
    double lo = a;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].t <= a) continue;
        if (pieces_[i].t >= b) break;
        total += value(lo) * (pieces_[i].t - lo);
        lo = pieces_[i].t;
    }
    total += value(lo >= a ? lo : a) * (b - lo);
    return total;
}

double StepFunction::min_value() const {
    double m = pieces_.front().v;
    for (const auto& p : pieces_) m = std::min(m, p.v);
    return m;
}

std::ostream& operator<<(std::ostream& os, const StepFunction& f) {
    os << "step[";
    for (std::size_t i = 0; i < f.pieces().size(); ++i) {
        if (i) os << " ";
        os << "(" << f.pieces()[i].t << "," << f.pieces()[i].v << ")";
    }
    return os << "]";
}

double arrival(const PwlFunction& f, double t) {
    if (!f.is_fifo()) throw std::invalid_argument("arrival: travel time violates FIFO");
    return t + f.value(t);
}

double arrival_inverse(const PwlFunction& f, double a) {
    if (!f.is_fifo()) throw std::invalid_argument("arrival_inverse: travel time violates FIFO");
    const auto& pts = f.points();
    // Arrival values at the breakpoints are strictly increasing, so the
    // segment containing `a` can be found by binary search and inverted in
    // closed form.
    double a_first = pts.front().t + pts.front().v;
    if (a <= a_first) return a - pts.front().v;
    double a_last = pts.back().t + pts.back().v;
    if (a >= a_last) return a - pts.back().v;
    std::size_t lo = 0, hi = pts.size() - 1;
    while (hi - lo > 1) {
        std::size_t mid = (lo + hi) / 2;
        if (pts[mid].t + pts[mid].v <= a)
            lo = mid;
        else
            hi = mid;
    }
    double alo = pts[lo].t + pts[lo].v;
    double ahi = pts[hi].t + pts[hi].v;
    double w = (a - alo) / (ahi - alo);
    return pts[lo].t + w * (pts[hi].t - pts[lo].t);
}

double travel_cost(const PwlFunction& tau, const StepFunction& b, double t) {
    return b.integral(t, arrival(tau, t));
}

std::vector<double> merge_times(std::vector<double> times, double eps) {
    std::sort(times.begin(), times.end());
    std::vector<double> out;
    for (double t : times) {
        if (!out.empty() && t - out.back() <= eps) continue;
        out.push_back(t);
    }
    return out;
}

std::vector<double> cost_breakpoints(const PwlFunction& tau, const StepFunction& b,
                                     double eps_slope) {
    double lo = std::min(tau.first_time(), b.pieces().front().t);
    double hi = std::max(tau.last_time(), b.pieces().back().t);
    if (!(hi > lo)) return {};

    std::vector<double> cand;
    for (const auto& p : b.pieces()) {
        cand.push_back(p.t);
        cand.push_back(arrival_inverse(tau, p.t));
    }
    for (const auto& p : tau.points()) cand.push_back(p.t);
    std::erase_if(cand, [&](double t) { return t <= lo + kEpsTime || t >= hi - kEpsTime; });
    cand = merge_times(std::move(cand));

    // Between consecutive candidates the cost is linear, so slopes follow
    // from evaluations at the candidates themselves.
    std::vector<double> grid = cand;
    grid.insert(grid.begin(), lo);
    grid.push_back(hi);
    std::vector<double> costs(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) costs[i] = travel_cost(tau, b, grid[i]);

    std::vector<double> out;
    for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
        double sl = (costs[i] - costs[i - 1]) / (grid[i] - grid[i - 1]);
        double sr = (costs[i + 1] - costs[i]) / (grid[i + 1] - grid[i]);
        if (std::fabs(sr - sl) > eps_slope) out.push_back(grid[i]);
    }
    return out;
}

} // namespace tdroute
