#ifndef CLASSICALITY_THRESHOLD_HPP
#define CLASSICALITY_THRESHOLD_HPP

// Threshold sizes N_t(epsilon, delta) for the su(2), su(1,1) and bosonic
// algebras, the inverse map delta <-> N_t, and geometric verification of
// the two discrimination conditions on a tessellation.

#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"

namespace classicality {

// Integer threshold convention: ceiling of the real-valued formula (the
// smallest ensemble size satisfying the bound).
inline long long integer_threshold(double nt_real) {
    return static_cast<long long>(std::ceil(nt_real));
}

// N_t = ln(eps) / ln(cos(delta/2)) + n
inline double nt_su2(double epsilon, double delta, int n) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("nt_su2: epsilon outside (0, 1)");
    if (!(delta > 0.0 && delta < pi))
        throw std::invalid_argument("nt_su2: delta outside (0, pi)");
    if (n < 0) throw std::invalid_argument("nt_su2: n < 0");
    return std::log(epsilon) / std::log(std::cos(delta / 2.0)) + n;
}

// N_t = -ln(eps) / (2k ln(cosh(delta/2))), k the Bargmann index
inline double nt_su11(double epsilon, double delta, double bargmann_k) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("nt_su11: epsilon outside (0, 1)");
    if (!(delta > 0.0)) throw std::invalid_argument("nt_su11: delta <= 0");
    if (!(bargmann_k > 0.0)) throw std::invalid_argument("nt_su11: k <= 0");
    return -std::log(epsilon) / (2.0 * bargmann_k * std::log(std::cosh(delta / 2.0)));
}

// N_t = -ln(eps) / delta^2
inline double nt_boson(double epsilon, double delta) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("nt_boson: epsilon outside (0, 1)");
    if (!(delta > 0.0)) throw std::invalid_argument("nt_boson: delta <= 0");
    return -std::log(epsilon) / (delta * delta);
}

// Inverse of nt_su2 in delta: the resolution that makes N_t equal nt.
inline double delta_for_nt(double epsilon, double nt, int n) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("delta_for_nt: epsilon outside (0, 1)");
    if (!(nt > n)) throw std::invalid_argument("delta_for_nt: Nt must exceed n");
    return 2.0 * std::acos(std::exp(std::log(epsilon) / (nt - n)));
}

// cos^(2J)(theta/2) > eps  =>  theta <= delta, i.e. theta_eps <= delta.
inline bool verify_implication_su2(int two_j, double epsilon, double delta) {
    return epsilon_support_radius(two_j, epsilon) <= delta;
}

// ---------------------------------------------------------------------------
// Geometric verification of the discrimination conditions on a tessellation

struct ConditionEntry {
    int tile_index = 0;       // sampled-point tile, or locate(probe)
    SpherePoint point;        // the sampled point or the probe
    double margin = 0.0;      // containment margin in radians; >= 0 passes
    bool pass = false;
};

struct DiscriminationReport {
    std::vector<ConditionEntry> sampled;  // cap-in-tile, one per sampled point
    std::vector<ConditionEntry> probes;   // cap-in-patch, one per probe
    double worst_margin = 0.0;

    bool sampled_pass() const {
        for (const auto& e : sampled) if (!e.pass) return false;
        return true;
    }
    bool probes_pass() const {
        for (const auto& e : probes) if (!e.pass) return false;
        return true;
    }
    bool pass() const { return sampled_pass() && probes_pass(); }
};

// Checks, for a given J and epsilon:
//  - per sampled point: the epsilon-support cap fits inside its own tile
//    (theta_eps <= distance from the sampled point to the tile boundary);
//  - per probe Sigma: the cap around Sigma fits inside the patch of the
//    tile containing Sigma (distance from Sigma to the patch boundary).
// Patch-boundary distances use the same refined arc minimization as
// strict_delta.
inline DiscriminationReport verify_tessellation_discrimination(
    const Tessellation& tess, int two_j, double epsilon,
    const std::vector<SpherePoint>& probes) {
    DiscriminationReport report;
    const double theta_eps = epsilon_support_radius(two_j, epsilon);
    report.worst_margin = pi;

    for (const Tile& t : tess.tiles()) {
        ConditionEntry e;
        e.tile_index = t.index;
        e.point = t.sampled_point;
        e.margin = tile_inradius(t) - theta_eps;
        e.pass = e.margin >= 0.0;
        report.worst_margin = std::min(report.worst_margin, e.margin);
        report.sampled.push_back(e);
    }

    for (const SpherePoint& sigma : probes) {
        ConditionEntry e;
        e.tile_index = tess.locate(sigma);
        e.point = sigma;
        const Patch p = tess.patch(e.tile_index);
        const auto arcs = detail::patch_boundary_arcs(tess, p);
        double dist = pi;
        for (const auto& arc : arcs) {
            const double d =
                arc.is_parallel
                    ? detail::distance_to_parallel_arc(sigma, arc.fixed, arc.lo, arc.hi)
                    : detail::distance_to_meridian_arc(sigma, arc.fixed, arc.lo, arc.hi);
            dist = std::min(dist, d);
        }
        e.margin = dist - theta_eps;
        e.pass = e.margin >= 0.0;
        report.worst_margin = std::min(report.worst_margin, e.margin);
        report.probes.push_back(e);
    }
    return report;
}

// Default probe set: every tile corner plus every sampled point.
inline std::vector<SpherePoint> default_probes(const Tessellation& tess) {
    std::vector<SpherePoint> probes;
    for (const Tile& t : tess.tiles()) {
        probes.push_back(t.sampled_point);
        if (!t.is_cap()) {
            const auto& c = t.cell();
            probes.emplace_back(c.theta_lo, c.phi_lo);
            probes.emplace_back(c.theta_lo, c.phi_hi);
            probes.emplace_back(c.theta_hi, c.phi_lo);
            probes.emplace_back(c.theta_hi, c.phi_hi);
        }
    }
    return probes;
}

}  // namespace classicality

#endif  // CLASSICALITY_THRESHOLD_HPP
