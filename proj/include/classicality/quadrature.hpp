#ifndef CLASSICALITY_QUADRATURE_HPP
#define CLASSICALITY_QUADRATURE_HPP

// Adaptive Gauss-Legendre quadrature in one and two dimensions. Panels are
// bisected until the coarse and refined estimates agree to the requested
// tolerance; exceeding the depth limit raises QuadratureError carrying the
// best estimate and its error bound.

#include <cmath>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>

namespace classicality {

struct QuadratureError : std::runtime_error {
    double best_estimate;
    double error_bound;
    QuadratureError(double estimate, double bound)
        : std::runtime_error("quadrature did not converge (estimate " +
                             std::to_string(estimate) + ", error bound " +
                             std::to_string(bound) + ")"),
          best_estimate(estimate),
          error_bound(bound) {}
};

namespace quad_detail {

// 15-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr int gl_n = 15;
inline constexpr double gl_x[gl_n] = {
    -0.9879925180204854, -0.9372733924007060, -0.8482065834104272,
    -0.7244177313601701, -0.5709721726085388, -0.3941513470775634,
    -0.2011940939974345, 0.0,                 0.2011940939974345,
    0.3941513470775634,  0.5709721726085388,  0.7244177313601701,
    0.8482065834104272,  0.9372733924007060,  0.9879925180204854};
inline constexpr double gl_w[gl_n] = {
    0.0307532419961173, 0.0703660474881081, 0.1071592204671719,
    0.1395706779261543, 0.1662692058169939, 0.1861610000155622,
    0.1984314853271116, 0.2025782419255613, 0.1984314853271116,
    0.1861610000155622, 0.1662692058169939, 0.1395706779261543,
    0.1071592204671719, 0.0703660474881081, 0.0307532419961173};

template <typename F>
double gauss_1d(const F& f, double a, double b) {
    const double h = 0.5 * (b - a), c = 0.5 * (a + b);
    double s = 0.0;
    for (int i = 0; i < gl_n; ++i) s += gl_w[i] * f(c + h * gl_x[i]);
    return s * h;
}

template <typename F>
double gauss_2d(const F& f, double ax, double bx, double ay, double by) {
    const double hx = 0.5 * (bx - ax), cx = 0.5 * (ax + bx);
    const double hy = 0.5 * (by - ay), cy = 0.5 * (ay + by);
    double s = 0.0;
    for (int i = 0; i < gl_n; ++i) {
        const double x = cx + hx * gl_x[i];
        double row = 0.0;
        for (int j = 0; j < gl_n; ++j) row += gl_w[j] * f(x, cy + hy * gl_x[j]);
        s += gl_w[i] * row;
    }
    return s * hx * hy;
}

}  // namespace quad_detail

// Integral of f over [a, b]. abs_tol is the absolute error budget.
template <typename F>
double integrate_1d(const F& f, double a, double b, double abs_tol,
                    int max_depth = 40) {
    struct Rec {
        const F& f;
        int max_depth;
        bool failed = false;
        double fail_estimate = 0.0, fail_bound = 0.0;
        double run(double a, double b, double coarse, double tol, int depth) {
            const double m = 0.5 * (a + b);
            const double left = quad_detail::gauss_1d(f, a, m);
            const double right = quad_detail::gauss_1d(f, m, b);
            const double fine = left + right;
            const double err = std::abs(fine - coarse);
            if (err <= tol) return fine;
            if (depth >= max_depth) {
                failed = true;
                fail_estimate += fine;
                fail_bound += err;
                return fine;
            }
            return run(a, m, left, 0.5 * tol, depth + 1) +
                   run(m, b, right, 0.5 * tol, depth + 1);
        }
    };
    Rec rec{f, max_depth};
    const double coarse = quad_detail::gauss_1d(f, a, b);
    const double result = rec.run(a, b, coarse, abs_tol, 0);
    if (rec.failed) throw QuadratureError(result, rec.fail_bound);
    return result;
}

// Integral of f over the rectangle [ax, bx] x [ay, by]. Panels split along
// their longer side.
template <typename F>
double integrate_2d(const F& f, double ax, double bx, double ay, double by,
                    double abs_tol, int max_depth = 32) {
    struct Rec {
        const F& f;
        int max_depth;
        bool failed = false;
        double fail_bound = 0.0;
        double run(double ax, double bx, double ay, double by, double coarse,
                   double tol, int depth) {
            double l1, l2, r1x = ax, r1X = bx, r1y = ay, r1Y = by;
            double r2x = ax, r2X = bx, r2y = ay, r2Y = by;
            if (bx - ax >= by - ay) {
                const double m = 0.5 * (ax + bx);
                r1X = m; r2x = m;
            } else {
                const double m = 0.5 * (ay + by);
                r1Y = m; r2y = m;
            }
            l1 = quad_detail::gauss_2d(f, r1x, r1X, r1y, r1Y);
            l2 = quad_detail::gauss_2d(f, r2x, r2X, r2y, r2Y);
            const double fine = l1 + l2;
            const double err = std::abs(fine - coarse);
            if (err <= tol) return fine;
            if (depth >= max_depth) {
                failed = true;
                fail_bound += err;
                return fine;
            }
            return run(r1x, r1X, r1y, r1Y, l1, 0.5 * tol, depth + 1) +
                   run(r2x, r2X, r2y, r2Y, l2, 0.5 * tol, depth + 1);
        }
    };
    Rec rec{f, max_depth};
    const double coarse = quad_detail::gauss_2d(f, ax, bx, ay, by);
    const double result = rec.run(ax, bx, ay, by, coarse, abs_tol, 0);
    if (rec.failed) throw QuadratureError(result, rec.fail_bound);
    return result;
}

}  // namespace classicality

#endif  // CLASSICALITY_QUADRATURE_HPP
