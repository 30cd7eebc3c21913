#ifndef CLASSICALITY_GCS_HPP
#define CLASSICALITY_GCS_HPP

// su(2) coherent-state kernel: basis coefficients, overlaps, Husimi
// functions, the invariant measure density, epsilon-support caps and
// epsilon-orthogonality. A Gaussian bosonic Husimi is included for the
// two-peak distinguishability demo.

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <vector>

#include "classicality/geometry.hpp"

namespace classicality {

// System of N spin-1/2 constituents with reduction n; total spin
// J = (N - n)/2. 2J is stored as an integer so half-integer J is exact.
struct SpinEnsemble {
    int N = 0;
    int n = 0;

    SpinEnsemble() = default;
    SpinEnsemble(int N_, int n_) : N(N_), n(n_) {
        if (N < 0) throw std::invalid_argument("SpinEnsemble: N < 0");
        if (n < 0 || n > N) throw std::invalid_argument("SpinEnsemble: n outside [0, N]");
    }

    int two_j() const { return N - n; }
    double j() const { return 0.5 * two_j(); }
};

// The two gauge parameters: epsilon (neglect threshold) and delta
// (instrument resolution).
struct EpsilonDelta {
    double epsilon;
    double delta;

    EpsilonDelta(double epsilon_, double delta_)
        : epsilon(epsilon_), delta(delta_) {
        if (!(epsilon > 0.0 && epsilon < 1.0))
            throw std::invalid_argument("EpsilonDelta: epsilon outside (0, 1)");
        if (!(delta > 0.0))
            throw std::invalid_argument("EpsilonDelta: delta <= 0");
    }
};

// ---------------------------------------------------------------------------

// Coefficients g_m of |Omega> in the |J, m> basis, m = -J..J:
//   g_m = sqrt(C(2J, m+J)) cos(t/2)^(J+m) sin(t/2)^(J-m) e^{i(J-m)phi}
// Binomials are taken in the log domain so large 2J does not overflow.
inline std::vector<std::complex<double>> su2_coefficients(int two_j,
                                                          const SpherePoint& omega) {
    if (two_j < 0) throw std::invalid_argument("su2_coefficients: 2J < 0");
    const double c = std::cos(omega.theta / 2.0);
    const double s = std::sin(omega.theta / 2.0);
    std::vector<std::complex<double>> g(static_cast<std::size_t>(two_j) + 1);
    for (int a = 0; a <= two_j; ++a) {  // a = m + J, so J + m = a, J - m = 2J - a
        const double log_binom = std::lgamma(two_j + 1.0) - std::lgamma(a + 1.0) -
                                 std::lgamma(two_j - a + 1.0);
        double log_mod = 0.5 * log_binom;
        if (a > 0) {
            if (c == 0.0) { g[static_cast<std::size_t>(a)] = 0.0; continue; }
            log_mod += a * std::log(c);
        }
        if (two_j - a > 0) {
            if (s == 0.0) { g[static_cast<std::size_t>(a)] = 0.0; continue; }
            log_mod += (two_j - a) * std::log(s);
        }
        const double arg = (two_j - a) * omega.phi;
        g[static_cast<std::size_t>(a)] =
            std::exp(log_mod) * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return g;
}

// <a|b> = [cos(ta/2)cos(tb/2) + sin(ta/2)sin(tb/2) e^{-i(pa-pb)}]^(2J),
// evaluated as exp(2J log base) so the modulus stays accurate at large J.
inline std::complex<double> su2_overlap(int two_j, const SpherePoint& a,
                                        const SpherePoint& b) {
    const std::complex<double> base =
        std::cos(a.theta / 2.0) * std::cos(b.theta / 2.0) +
        std::sin(a.theta / 2.0) * std::sin(b.theta / 2.0) *
            std::exp(std::complex<double>(0.0, -(a.phi - b.phi)));
    if (two_j == 0) return 1.0;
    if (std::abs(base) == 0.0) return 0.0;
    return std::exp(static_cast<double>(two_j) * std::log(base));
}

// log |<a|b>|^2; -inf for orthogonal states.
inline double log_husimi(int two_j, const SpherePoint& sigma,
                         const SpherePoint& omega) {
    const double half = 0.5 * geodesic_distance(sigma, omega);
    const double c = std::cos(half);
    if (c <= 0.0) return -std::numeric_limits<double>::infinity();
    return 2.0 * two_j * std::log(c);
}

// Husimi function H_sigma(omega) = |<sigma|omega>|^2 = cos^(4J)(D/2).
inline double husimi(int two_j, const SpherePoint& sigma,
                     const SpherePoint& omega) {
    return std::exp(log_husimi(two_j, sigma, omega));
}

// Density of the invariant measure w.r.t. sin(theta) dtheta dphi.
inline double measure_density(int two_j) { return (two_j + 1) / (4.0 * pi); }

// Angular radius of the epsilon-support cap: theta_eps = 2 arccos(eps^(1/2J)).
inline double epsilon_support_radius(int two_j, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("epsilon_support_radius: epsilon outside (0, 1)");
    if (two_j <= 0)
        throw std::invalid_argument("epsilon_support_radius: J must be > 0");
    const double root = std::exp(std::log(epsilon) / two_j);
    return 2.0 * std::acos(std::min(root, 1.0));
}

// |<a|b>| <= epsilon, i.e. the points are at least theta_eps apart.
inline bool epsilon_orthogonal(int two_j, double epsilon, const SpherePoint& a,
                               const SpherePoint& b) {
    return geodesic_distance(a, b) >= epsilon_support_radius(two_j, epsilon);
}

// Gaussian bosonic Husimi exp(-N |omega - center|^2), visualization only.
inline double boson_husimi_demo(double N, std::complex<double> center,
                                std::complex<double> omega) {
    if (!(N > 0.0)) throw std::invalid_argument("boson_husimi_demo: N <= 0");
    return std::exp(-N * std::norm(omega - center));
}

}  // namespace classicality

#endif  // CLASSICALITY_GCS_HPP
