#pragma once

#include "tdroute/tdgraph.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tdroute {

enum class Pattern { A, B };

/// Generator parameters. Pattern A puts a limited traffic zone in the
/// center of the unit square, pattern B a heavy congestion zone; delta is
/// the worst congestion-factor degradation realized by the instance.
struct GenSpec {
    int n = 10;
    Pattern pattern = Pattern::A;
    double delta = 0.9;
    int periods = 6;
    double horizon = 100.0;
    std::uint64_t seed = 1;
    double zone_lo = 1.0 / 3.0;
    double zone_hi = 2.0 / 3.0;
    // Depth of the midday dip of the period profile; defaults per pattern
    // (0.15 for A, 0.35 for B). Zero makes every period factor 1.
    std::optional<double> f_dip;

    void validate() const; // throws std::invalid_argument
};

/// v_ijh = delta_ijh * f_h * u_ij: max speed per arc, best per-period
/// congestion factor, and per-arc-period degradation.
struct SpeedDecomposition {
    std::map<Arc, double> u;
    std::vector<double> f;
    std::map<Arc, std::vector<double>> delta;

    double realized_delta() const;
};

struct GeneratedInstance {
    TdGraph graph;
    SpeedDecomposition speeds;
    std::vector<std::pair<double, double>> points;
};

// Complete FIFO instance: vertices uniform in the unit square, arcs crossing
// the central zone degraded per pattern, travel times integrated from the
// step speeds. One arc-period is pinned so the realized minimum degradation
// equals spec.delta exactly, and one arc keeps degradation 1 in every period
// so the realized best factor equals f_h.
GeneratedInstance generate_detailed(const GenSpec& spec);
TdGraph generate(const GenSpec& spec);

// Line-oriented text format, '#' comments:
//   TDTSP <n> <T> <t0>
//   arc <i> <j> <K> <t_1> <v_1> ... <t_K> <v_K>
// Values printed with up to 12 significant digits; read(write(g)) is
// structurally equal to g and re-serializes to identical bytes.
void write_instance(const TdGraph& g, std::ostream& os);
std::string instance_to_string(const TdGraph& g);
void write_instance_file(const TdGraph& g, const std::string& path);

// Throws std::runtime_error with the offending line number on malformed
// input and std::invalid_argument on FIFO violations.
TdGraph read_instance(std::istream& is);
TdGraph read_instance_file(const std::string& path);

// CSV manifest describing generated files.
std::string manifest_header();
std::string manifest_row(const std::string& file, const GenSpec& spec);

} // namespace tdroute
