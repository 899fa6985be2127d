#pragma once

#include <iosfwd>
#include <vector>

namespace tdroute {

// Absolute tolerances, in horizon units, used for time and cost comparisons
// throughout the library.
inline constexpr double kEpsTime = 1e-9;
inline constexpr double kEpsCost = 1e-9;
inline constexpr double kEpsSlope = 1e-9;

/// Continuous piecewise linear function of time. Between consecutive
/// breakpoints the function interpolates linearly; outside the breakpoint
/// span it is clamped constant on both sides.
class PwlFunction {
public:
    struct Breakpoint {
        double t;
        double v;
        bool operator==(const Breakpoint&) const = default;
    };

    // Breakpoint times must be strictly increasing and there must be at
    // least one breakpoint. Throws std::invalid_argument otherwise.
    explicit PwlFunction(std::vector<Breakpoint> points);
    PwlFunction(std::initializer_list<Breakpoint> points);

    static PwlFunction constant(double value, double at = 0.0);

    const std::vector<Breakpoint>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double first_time() const { return points_.front().t; }
    double last_time() const { return points_.back().t; }

    double value(double t) const;

    // True iff usable as a travel time: all values strictly positive and
    // every segment slope > -1, so the arrival map t + f(t) is strictly
    // increasing.
    bool is_fifo() const { return fifo_; }

    double min_value() const;
    double max_value() const;

    // Minimum of the clamped function over [lo, hi].
    double min_on(double lo, double hi) const;

    std::vector<double> breakpoint_times() const;

    // \int_a^b f(t) dt with the clamped extension, a <= b.
    double integral(double a, double b) const;

    // Merges breakpoints closer than eps and drops collinear interior
    // points.
    PwlFunction simplified(double eps_time = kEpsTime) const;

    bool operator==(const PwlFunction&) const = default;

private:
    std::vector<Breakpoint> points_;
    bool fifo_ = false;
};

std::ostream& operator<<(std::ostream&, const PwlFunction&);

/// Right-continuous piecewise constant function: value v_h holds on
/// [t_h, t_{h+1}), the last value persists beyond the final breakpoint and
/// the first value applies before the first breakpoint. All values must be
/// strictly positive.
class StepFunction {
public:
    struct Piece {
        double t;
        double v;
        bool operator==(const Piece&) const = default;
    };

    explicit StepFunction(std::vector<Piece> pieces);
    StepFunction(std::initializer_list<Piece> pieces);

    static StepFunction constant(double value, double at = 0.0);
    static StepFunction on_grid(const std::vector<double>& times,
                                const std::vector<double>& values);

    const std::vector<Piece>& pieces() const { return pieces_; }
    std::size_t size() const { return pieces_.size(); }

    double value(double t) const;
    std::vector<double> breakpoint_times() const;

    // \int_a^b s(t) dt, a <= b.
    double integral(double a, double b) const;

    double min_value() const;

    bool operator==(const StepFunction&) const = default;

private:
    std::vector<Piece> pieces_;
};

std::ostream& operator<<(std::ostream&, const StepFunction&);

// Arrival map of a FIFO travel time: arrival(f, t) = t + f(t), strictly
// increasing in t. Throws std::invalid_argument when f is not FIFO.
double arrival(const PwlFunction& f, double t);

// Inverse of the arrival map: arrival(f, arrival_inverse(f, a)) == a.
// Well defined on all of R because the clamped extension keeps the map a
// bijection.
double arrival_inverse(const PwlFunction& f, double a);

// Travel cost of traversing an arc with travel time tau leaving at t under
// the unit-cost profile b: \int_t^{t + tau(t)} b(mu) dmu.
double travel_cost(const PwlFunction& tau, const StepFunction& b, double t);

// Times where t -> travel_cost(tau, b, t) actually changes slope, restricted
// to the open interior of the span covered by the inputs' breakpoints.
// Candidates are the breakpoints of b, of tau, and the departure times whose
// arrival hits a breakpoint of b; a candidate is kept only when the slope
// change exceeds eps_slope.
std::vector<double> cost_breakpoints(const PwlFunction& tau, const StepFunction& b,
                                     double eps_slope = kEpsSlope);

// Sorts, then merges values closer than eps keeping the first representative.
std::vector<double> merge_times(std::vector<double> times, double eps = kEpsTime);

} // namespace tdroute
