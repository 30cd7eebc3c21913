#ifndef CLASSICALITY_POVM_HPP
#define CLASSICALITY_POVM_HPP

// The GCS-discrimination POVM on a tessellated sphere: exact and
// epsilon-truncated tile probabilities by adaptive quadrature, the
// null-outcome probability, full probability tables and seeded
// single-shot sampling.

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>
#include <vector>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"
#include "classicality/quadrature.hpp"

namespace classicality {

// (2J+1)/(4pi) * integral over the tile (optionally masked to the geodesic
// cap of mask_radius around sigma) of cos^(4J)(D/2) sin(theta) dtheta dphi.
//
// A cap fully inside the tile integrates in closed form (substituting
// u = cos^2(theta/2) in the cap-centered frame gives 1 - cos^(4J+2)(r/2));
// a tile disjoint from the cap contributes nothing without quadrature.
inline double integrate_husimi_over_region(int two_j, const SpherePoint& sigma,
                                           const Tile& tile,
                                           std::optional<double> mask_radius,
                                           double tol = 1e-8) {
    if (!(tol > 0.0)) throw std::invalid_argument("integrate_husimi_over_region: tol <= 0");
    if (mask_radius) {
        const double r = *mask_radius;
        if (distance_to_tile(sigma, tile) >= r) return 0.0;
        if (tile.contains(sigma) && distance_to_tile_boundary(sigma, tile) >= r)
            return -std::expm1((2.0 * two_j + 2.0) * std::log(std::cos(r / 2.0)));
    }

    const double density = measure_density(two_j);
    auto integrand = [&](double theta, double phi) {
        return density * husimi(two_j, sigma, SpherePoint(theta, phi)) * std::sin(theta);
    };

    double t_lo, t_hi, p_lo, p_hi;
    if (tile.is_cap()) {
        const double r = tile.cap().radius;
        t_lo = tile.cap().pole == Pole::north ? 0.0 : pi - r;
        t_hi = tile.cap().pole == Pole::north ? r : pi;
        p_lo = 0.0;
        p_hi = 2.0 * pi;
    } else {
        const auto& c = tile.cell();
        t_lo = c.theta_lo; t_hi = c.theta_hi;
        p_lo = c.phi_lo;   p_hi = c.phi_hi;
    }

    if (!mask_radius) {
        // Convert the relative tolerance to an absolute budget from a rough pass.
        const double rough = quad_detail::gauss_2d(integrand, t_lo, t_hi, p_lo, p_hi);
        const double abs_tol = tol * std::max(std::abs(rough), 1e-15);
        return integrate_2d(integrand, t_lo, t_hi, p_lo, p_hi, abs_tol);
    }

    // Masked case with the cap crossing the tile boundary. A hard cutoff
    // inside a 2-D panel ruins adaptive convergence, so integrate the
    // latitude rows instead: at each theta the cap is an explicit
    // phi-window (spherical law of cosines), leaving both the inner and
    // the outer integrand piecewise smooth.
    const double r = *mask_radius;
    const double row_lo = std::max(t_lo, sigma.theta - r);
    const double row_hi = std::min(t_hi, sigma.theta + r);
    if (row_hi <= row_lo) return 0.0;

    auto row = [&](double theta) {
        const double s = std::sin(theta) * std::sin(sigma.theta);
        double half_width;  // phi half-width of the cap at this latitude
        if (s <= 1e-300) {
            half_width =
                std::cos(theta) * std::cos(sigma.theta) > std::cos(r) ? pi : 0.0;
        } else {
            const double c =
                (std::cos(r) - std::cos(theta) * std::cos(sigma.theta)) / s;
            if (c >= 1.0) return 0.0;
            half_width = c <= -1.0 ? pi : std::acos(c);
        }
        if (half_width == 0.0) return 0.0;

        auto window = [&](double a, double b) {
            const double rough = quad_detail::gauss_1d(
                [&](double phi) { return integrand(theta, phi); }, a, b);
            return integrate_1d([&](double phi) { return integrand(theta, phi); },
                                a, b,
                                1e-3 * tol * std::max(std::abs(rough), 1e-15) + 1e-18);
        };
        if (half_width >= pi) return window(p_lo, p_hi);  // full circle

        // Intersect [sigma.phi - w, sigma.phi + w] with the tile's phi
        // range, trying the three 2 pi shifts to cover the seam.
        double total = 0.0;
        for (double shift : {-2.0 * pi, 0.0, 2.0 * pi}) {
            const double a = std::max(p_lo, sigma.phi + shift - half_width);
            const double b = std::min(p_hi, sigma.phi + shift + half_width);
            if (b <= a) continue;
            total += window(a, b);
        }
        return total;
    };

    const double rough = quad_detail::gauss_1d(row, row_lo, row_hi);
    const double abs_tol = tol * std::max(std::abs(rough), 1e-15);
    return integrate_1d(row, row_lo, row_hi, abs_tol);
}

// Born-rule probability of the outcome attached to tile i, no truncation.
inline double effect_probability_exact(int two_j, const SpherePoint& sigma,
                                       const Tessellation& tess, int i,
                                       double tol = 1e-8) {
    return integrate_husimi_over_region(two_j, sigma, tess.tile(i), std::nullopt, tol);
}

// Probability with the overlap set to zero outside the epsilon-support cap.
inline double effect_probability_truncated(int two_j, const SpherePoint& sigma,
                                           double epsilon, const Tessellation& tess,
                                           int i, double tol = 1e-8) {
    const double theta_eps = epsilon_support_radius(two_j, epsilon);
    return integrate_husimi_over_region(two_j, sigma, tess.tile(i), theta_eps, tol);
}

// Closed-form null-outcome probability eps^(2 + 1/J).
inline double p_null_closed(int two_j, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("p_null_closed: epsilon outside (0, 1)");
    if (two_j <= 0) throw std::invalid_argument("p_null_closed: J must be > 0");
    return std::exp((2.0 + 2.0 / two_j) * std::log(epsilon));
}

// Null probability by direct quadrature over theta > theta_eps, as an
// independent route to the closed form.
inline double p_null_quadrature(int two_j, double epsilon, double tol = 1e-10) {
    const double theta_eps = epsilon_support_radius(two_j, epsilon);
    const SpherePoint pole(0.0, 0.0);
    auto integrand = [&](double theta) {
        return husimi(two_j, pole, SpherePoint(theta, 0.0)) * std::sin(theta);
    };
    const double rough = quad_detail::gauss_1d(integrand, theta_eps, pi);
    const double abs_tol = tol * std::max(std::abs(rough), 1e-15);
    return 0.5 * (two_j + 1) * integrate_1d(integrand, theta_eps, pi, abs_tol);
}

// ---------------------------------------------------------------------------

enum class TableMode { exact, truncated };

struct ProbabilityTable {
    SpinEnsemble ensemble;
    SpherePoint state;                 // Sigma
    int tessellation_k = 0;
    TableMode mode = TableMode::exact;
    double epsilon = 0.0;              // meaningful in truncated mode
    std::vector<double> entries;       // entries[i-1] = p(m_i)
    double p_null = 0.0;               // 0 in exact mode

    double entry(int index) const { return entries.at(static_cast<std::size_t>(index - 1)); }
    double sum() const {
        double s = 0.0;
        for (double e : entries) s += e;  // ascending tile index
        return s;
    }
};

// Full probability table. In truncated mode only tiles intersecting the
// epsilon-support cap are integrated; the rest are zero without quadrature.
// Tile integrals run on a thread pool; the per-tile results are stored by
// index so the table does not depend on scheduling.
inline ProbabilityTable probability_table(const SpinEnsemble& ens,
                                          const SpherePoint& sigma,
                                          const Tessellation& tess, TableMode mode,
                                          double epsilon = 0.0, double tol = 1e-8,
                                          unsigned threads = 0) {
    ProbabilityTable table;
    table.ensemble = ens;
    table.state = sigma;
    table.tessellation_k = tess.k();
    table.mode = mode;
    table.epsilon = epsilon;
    table.entries.assign(tess.tile_count(), 0.0);
    const int two_j = ens.two_j();

    std::optional<double> mask;
    if (mode == TableMode::truncated) {
        mask = epsilon_support_radius(two_j, epsilon);
        table.p_null = p_null_closed(two_j, epsilon);
    }

    const std::size_t count = tess.tile_count();
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(count));

    std::exception_ptr failure;
    auto worker = [&](unsigned id) {
        for (std::size_t t = id; t < count; t += threads) {
            try {
                table.entries[t] = integrate_husimi_over_region(
                    two_j, sigma, tess.tile(static_cast<int>(t) + 1), mask, tol);
            } catch (...) {
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);
    return table;
}

// Single-shot outcome: a tile index, or 0 for the null outcome. The draw
// uses an explicit 53-bit uniform from mt19937_64 so results are
// bit-reproducible across platforms.
inline int sample_outcome(const ProbabilityTable& table, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    const double total = table.sum() + table.p_null;
    double acc = 0.0;
    for (std::size_t t = 0; t < table.entries.size(); ++t) {
        acc += table.entries[t];
        if (u * total < acc) return static_cast<int>(t) + 1;
    }
    return 0;  // null outcome
}

}  // namespace classicality

#endif  // CLASSICALITY_POVM_HPP
