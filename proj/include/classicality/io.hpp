#ifndef CLASSICALITY_IO_HPP
#define CLASSICALITY_IO_HPP

// Structured exports: tessellation JSON document, probability-table CSV,
// and Husimi surface CSV. Numeric formatting is fixed (15 significant
// digits) so identical inputs produce byte-identical files.

#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

#include "classicality/geometry.hpp"
#include "classicality/povm.hpp"

namespace classicality {

inline std::string format_angle(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.15g", value);
    return buf;
}

// JSON document: k, L, per-tile {index, kind, theta_range, phi_range,
// sampled_point}, adjacency lists. Angles in radians, 15 significant digits.
inline nlohmann::ordered_json tessellation_to_json(const Tessellation& tess) {
    nlohmann::ordered_json doc;
    doc["k"] = tess.k();
    doc["L"] = tess.tile_count();
    auto& tiles = doc["tiles"] = nlohmann::ordered_json::array();
    for (const Tile& t : tess.tiles()) {
        nlohmann::ordered_json entry;
        entry["index"] = t.index;
        if (t.is_cap()) {
            entry["kind"] = t.cap().pole == Pole::north ? "north_cap" : "south_cap";
            entry["radius"] = format_angle(t.cap().radius);
        } else {
            entry["kind"] = "cell";
            entry["theta_range"] = {format_angle(t.cell().theta_lo),
                                    format_angle(t.cell().theta_hi)};
            entry["phi_range"] = {format_angle(t.cell().phi_lo),
                                  format_angle(t.cell().phi_hi)};
        }
        entry["sampled_point"] = {format_angle(t.sampled_point.theta),
                                  format_angle(t.sampled_point.phi)};
        tiles.push_back(entry);
    }
    auto& adjacency = doc["adjacency"] = nlohmann::ordered_json::object();
    for (const Tile& t : tess.tiles()) {
        auto& list = adjacency[std::to_string(t.index)] = nlohmann::ordered_json::array();
        for (int j : tess.adjacency(t.index)) list.push_back(j);
    }
    return doc;
}

// CSV: tile_index, p rows in ascending index order, final row NULL, p_null.
// Header comments carry the full parameter set.
inline void write_probability_table_csv(std::ostream& out,
                                        const ProbabilityTable& table,
                                        double quadrature_tol,
                                        long long seed = -1) {
    out << "# J=" << format_angle(table.ensemble.j())
        << " N=" << table.ensemble.N << " n=" << table.ensemble.n << "\n";
    out << "# k=" << table.tessellation_k
        << " sigma_theta=" << format_angle(table.state.theta)
        << " sigma_phi=" << format_angle(table.state.phi) << "\n";
    out << "# mode=" << (table.mode == TableMode::exact ? "exact" : "truncated");
    if (table.mode == TableMode::truncated)
        out << " epsilon=" << format_angle(table.epsilon);
    out << " quadrature_tol=" << format_angle(quadrature_tol);
    if (seed >= 0) out << " seed=" << seed;
    out << "\n";
    out << "tile_index,p\n";
    for (std::size_t t = 0; t < table.entries.size(); ++t)
        out << (t + 1) << "," << format_angle(table.entries[t]) << "\n";
    out << "NULL," << format_angle(table.p_null) << "\n";
}

// CSV surface of the Husimi function over a theta x phi lattice.
inline void write_husimi_grid_csv(std::ostream& out, int two_j,
                                  const SpherePoint& sigma, int n_theta,
                                  int n_phi) {
    out << "# two_j=" << two_j << " sigma_theta=" << format_angle(sigma.theta)
        << " sigma_phi=" << format_angle(sigma.phi) << " n_theta=" << n_theta
        << " n_phi=" << n_phi << "\n";
    out << "theta,phi,value\n";
    for (int it = 0; it <= n_theta; ++it) {
        const double theta = pi * it / n_theta;
        for (int ip = 0; ip < n_phi; ++ip) {
            const double phi = 2.0 * pi * ip / n_phi;
            out << format_angle(theta) << "," << format_angle(phi) << ","
                << format_angle(husimi(two_j, sigma, SpherePoint(theta, phi)))
                << "\n";
        }
    }
}

}  // namespace classicality

#endif  // CLASSICALITY_IO_HPP
