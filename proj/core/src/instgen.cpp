#include "tdroute/instgen.hpp"

#include "tdroute/bounds.hpp"
#include "tdroute/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace tdroute {

void GenSpec::validate() const {
    if (n < 2) throw std::invalid_argument("GenSpec: need at least 2 vertices");
    if (!(delta > 0.0) || delta > 1.0) throw std::invalid_argument("GenSpec: delta must be in (0, 1]");
    if (periods < 2) throw std::invalid_argument("GenSpec: need at least 2 periods");
    if (!(horizon > 0.0)) throw std::invalid_argument("GenSpec: horizon must be positive");
    if (!(zone_lo < zone_hi)) throw std::invalid_argument("GenSpec: empty zone");
    if (f_dip && (*f_dip < 0.0 || *f_dip > 0.9))
        throw std::invalid_argument("GenSpec: f_dip must be in [0, 0.9]");
}

double SpeedDecomposition::realized_delta() const {
    double m = 1.0;
    for (const auto& [arc, ds] : delta)
        for (double d : ds) m = std::min(m, d);
    return m;
}

namespace {

// Segment-box intersection (Liang-Barsky clip).
bool crosses_zone(std::pair<double, double> a, std::pair<double, double> b, double lo, double hi) {
    double t0 = 0.0, t1 = 1.0;
    double dx = b.first - a.first, dy = b.second - a.second;
    auto clip = [&](double p, double q) {
        if (p == 0.0) return q >= 0.0;
        double r = q / p;
        if (p < 0.0) {
            if (r > t1) return false;
            if (r > t0) t0 = r;
        } else {
            if (r < t0) return false;
            if (r < t1) t1 = r;
        }
        return true;
    };
    return clip(-dx, a.first - lo) && clip(dx, hi - a.first) && clip(-dy, a.second - lo) &&
           clip(dy, hi - a.second);
}

} // namespace

GeneratedInstance generate_detailed(const GenSpec& spec) {
    spec.validate();
    SplitMix64 rng(spec.seed);
    const int n = spec.n;
    const int H = spec.periods;
    const double T = spec.horizon;

    std::vector<std::pair<double, double>> pts(n);
    for (auto& p : pts) {
        p.first = rng.next_double();
        p.second = rng.next_double();
    }

    std::vector<Arc> arcs;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) arcs.push_back({i, j});

    SpeedDecomposition sd;
    // Speeds sized so a typical tour spends about half the horizon on the
    // road; keeps the congestion periods active along the whole tour.
    const double u_base = 1.25 * n / T;
    for (const auto& a : arcs) sd.u[a] = u_base * rng.uniform(0.75, 1.25);

    const double dip = spec.f_dip ? *spec.f_dip : (spec.pattern == Pattern::A ? 0.15 : 0.35);
    sd.f.resize(H);
    for (int h = 0; h < H; ++h) {
        double s = std::sin(M_PI * (h + 0.5) / H);
        sd.f[h] = std::max(0.1, 1.0 - dip * s * s);
    }

    // Degradation draws happen for every arc-period in a fixed order so
    // instances with different delta but the same seed share geometry and
    // noise.
    std::vector<char> zone(arcs.size(), 0);
    for (std::size_t a = 0; a < arcs.size(); ++a)
        zone[a] = crosses_zone(pts[arcs[a].first], pts[arcs[a].second], spec.zone_lo, spec.zone_hi);
    // One arc keeps degradation 1 everywhere so the best per-period factor
    // is realized exactly.
    std::size_t free_arc = 0;
    for (std::size_t a = 0; a < arcs.size(); ++a)
        if (!zone[a]) { free_arc = a; break; }
    zone[free_arc] = 0;

    const double intensity = spec.pattern == Pattern::A ? 0.5 : 1.0;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
        std::vector<double> ds(H, 1.0);
        for (int h = 0; h < H; ++h) {
            double xi = rng.next_double();
            if (zone[a]) ds[h] = 1.0 - (1.0 - spec.delta) * intensity * xi;
        }
        sd.delta[arcs[a]] = std::move(ds);
    }
    // Pin the worst degradation to delta exactly.
    if (spec.delta < 1.0) {
        Arc pin_arc = arcs.back();
        int pin_h = H / 2;
        double cur = 2.0;
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            if (a == free_arc || !zone[a]) continue;
            for (int h = 0; h < H; ++h) {
                if (sd.delta[arcs[a]][h] < cur) {
                    cur = sd.delta[arcs[a]][h];
                    pin_arc = arcs[a];
                    pin_h = h;
                }
            }
        }
        sd.delta[pin_arc][pin_h] = spec.delta;
    }

    std::vector<double> period_grid(H);
    for (int h = 0; h < H; ++h) period_grid[h] = T * h / H;

    TdGraph g(n, T, 0.0);
    for (const auto& a : arcs) {
        double dx = pts[a.first].first - pts[a.second].first;
        double dy = pts[a.first].second - pts[a.second].second;
        double len = std::max(1e-3, std::hypot(dx, dy));
        std::vector<double> speeds(H);
        for (int h = 0; h < H; ++h) speeds[h] = sd.delta[a][h] * sd.f[h] * sd.u[a];
        StepFunction v = StepFunction::on_grid(period_grid, speeds);
        // Travel time = time to cover len at step speeds, i.e. the IGP
        // recursion with distance in place of cost.
        g.add_arc(a.first, a.second, materialize_igp(v, len, 0.0, T));
    }
    return {std::move(g), std::move(sd), std::move(pts)};
}

TdGraph generate(const GenSpec& spec) { return generate_detailed(spec).graph; }

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

} // namespace

void write_instance(const TdGraph& g, std::ostream& os) {
    os << "# tdroute instance\n";
    os << "TDTSP " << g.num_vertices() << " " << fmt(g.horizon()) << " " << fmt(g.start_time())
       << "\n";
    for (const auto& [i, j] : g.arcs()) {
        const auto& pts = g.arc(i, j).points();
        os << "arc " << i << " " << j << " " << pts.size();
        for (const auto& p : pts) os << " " << fmt(p.t) << " " << fmt(p.v);
        os << "\n";
    }
}

std::string instance_to_string(const TdGraph& g) {
    std::ostringstream ss;
    write_instance(g, ss);
    return ss.str();
}

void write_instance_file(const TdGraph& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    write_instance(g, out);
}

TdGraph read_instance(std::istream& is) {
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw std::runtime_error("line " + std::to_string(lineno) + ": " + msg);
    };

    std::optional<TdGraph> g;
    while (std::getline(is, line)) {
        ++lineno;
        std::string stripped = line.substr(0, line.find('#'));
        std::istringstream ss(stripped);
        std::string tag;
        if (!(ss >> tag)) continue;
        if (tag == "TDTSP") {
            int n;
            double T, t0;
            if (!(ss >> n >> T >> t0)) fail("malformed header, expected: TDTSP n T t0");
            if (n < 1 || !(T > 0.0)) fail("invalid header values");
            g.emplace(n, T, t0);
        } else if (tag == "arc") {
            if (!g) fail("arc line before TDTSP header");
            int i, j;
            std::size_t k;
            if (!(ss >> i >> j >> k)) fail("malformed arc line");
            if (k < 1) fail("arc needs at least one breakpoint");
            std::vector<PwlFunction::Breakpoint> pts(k);
            for (auto& p : pts)
                if (!(ss >> p.t >> p.v)) fail("arc line truncated");
            double extra;
            if (ss >> extra) fail("trailing values on arc line");
            try {
                g->add_arc(i, j, PwlFunction(std::move(pts)));
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        } else {
            fail("unknown directive '" + tag + "'");
        }
    }
    if (!g) throw std::runtime_error("empty instance: no TDTSP header");
    return *std::move(g);
}

TdGraph read_instance_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    return read_instance(in);
}

std::string manifest_header() { return "file,n,pattern,delta,periods,horizon,seed"; }

std::string manifest_row(const std::string& file, const GenSpec& spec) {
    std::ostringstream ss;
    ss << file << "," << spec.n << "," << (spec.pattern == Pattern::A ? "A" : "B") << ","
       << spec.delta << "," << spec.periods << "," << spec.horizon << "," << spec.seed;
    return ss.str();
}

} // namespace tdroute
