#ifndef CLASSICALITY_MONGE_HPP
#define CLASSICALITY_MONGE_HPP

// Monge distance between su(2) coherent states: the closed form built from
// the A(u, v) series, the 1-D Salvemini integral, and an exact discrete
// transport solver used as an independent oracle.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>
#include <vector>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"
#include "classicality/quadrature.hpp"

namespace classicality {

// ---------------------------------------------------------------------------
// A(u, v) = sum_{s = v+1}^inf C(2s, s) / ((u + s + 1) 4^s)
//
// The terms decay like s^(-3/2), too slowly to sum outright; the tail past
// S is replaced by a midpoint integral of the asymptotic form
// (1 - 1/(8s)) / (sqrt(pi s) (s + u + 1)), and S doubles until the result
// is stable to tol.

namespace monge_detail {

// Integral from X to infinity of s^(-1/2) / (s + a) ds.
inline double tail_i0(double X, double a) {
    return 2.0 / std::sqrt(a) * std::atan(std::sqrt(a / X));
}

// Integral from X to infinity of s^(-3/2) / (s + a) ds.
inline double tail_i1(double X, double a) {
    return (2.0 / std::sqrt(X) - tail_i0(X, a)) / a;
}

inline double tail_estimate(long long S, int u) {
    const double X = S + 0.5;
    const double a = u + 1.0;
    constexpr double inv_sqrt_pi = 0.5641895835477563;
    return inv_sqrt_pi * (tail_i0(X, a) - tail_i1(X, a) / 8.0);
}

// Partial sum of the series terms for s in [v+1, S], with b_s = C(2s,s)/4^s
// carried multiplicatively.
inline double partial_sum(int u, int v, long long S) {
    double b = 1.0;  // b_0
    double sum = 0.0;
    for (long long s = 1; s <= S; ++s) {
        b *= (2.0 * s - 1.0) / (2.0 * s);
        if (s > v) sum += b / (u + s + 1.0);
    }
    return sum;
}

}  // namespace monge_detail

inline double a_series(int u, int v, double tol = 1e-10) {
    if (u < 0 || v < 0) throw std::invalid_argument("a_series: u, v must be >= 0");
    if (!(tol > 0.0)) throw std::invalid_argument("a_series: tol <= 0");
    long long S = std::max<long long>(4096, 4 * (v + 1));
    double prev = monge_detail::partial_sum(u, v, S) + monge_detail::tail_estimate(S, u);
    for (int round = 0; round < 12; ++round) {
        S *= 2;
        const double cur =
            monge_detail::partial_sum(u, v, S) + monge_detail::tail_estimate(S, u);
        if (std::abs(cur - prev) < tol) return cur;
        prev = cur;
    }
    return prev;
}

// ---------------------------------------------------------------------------
// Closed-form Monge distance d_M(J; theta) = pi sin(theta/2) W_J[sin^2(theta/2)]

struct MongeEvaluation {
    int two_j = 0;
    double theta = 0.0;
    double value = 0.0;
    double series_tolerance = 0.0;
};

namespace monge_detail {

// Memoized A(u, 0) at the default tolerance; the long summations dominate
// the closed-form cost and recur for every evaluation.
inline double a_u0_cached(int u, double tol) {
    static std::mutex mutex;
    static std::map<std::pair<int, double>, double> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto [it, inserted] = cache.try_emplace({u, tol}, 0.0);
    if (inserted) it->second = a_series(u, 0, tol);
    return it->second;
}

// A(u, v) for all u + v <= w_max, sharing one long summation per u:
// A(u, v) = A(u, 0) - sum_{s=1}^{v} b_s / (u + s + 1).
inline std::vector<std::vector<double>> a_table(int w_max, double tol) {
    std::vector<std::vector<double>> table(static_cast<std::size_t>(w_max) + 1);
    for (int u = 0; u <= w_max; ++u) {
        const int v_max = w_max - u;
        auto& row = table[static_cast<std::size_t>(u)];
        row.resize(static_cast<std::size_t>(v_max) + 1);
        row[0] = a_u0_cached(u, tol);
        double b = 1.0;
        for (int s = 1; s <= v_max; ++s) {
            b *= (2.0 * s - 1.0) / (2.0 * s);
            row[static_cast<std::size_t>(s)] =
                row[static_cast<std::size_t>(s - 1)] - b / (u + s + 1.0);
        }
    }
    return table;
}

}  // namespace monge_detail

// The W_J sum runs over u, v >= 0 with 2J - 2(u + v) - 1 >= 0, the domain
// on which the factorial in S_J(u, v) is defined. All terms are positive;
// factorials and powers are accumulated in the log domain.
inline MongeEvaluation monge_su2(int two_j, double theta, double tol = 1e-10) {
    if (two_j <= 0) throw std::invalid_argument("monge_su2: J must be > 0");
    if (!(theta >= 0.0 && theta <= pi))
        throw std::invalid_argument("monge_su2: theta outside [0, pi]");
    MongeEvaluation eval;
    eval.two_j = two_j;
    eval.theta = theta;
    eval.series_tolerance = tol;
    if (theta == 0.0) return eval;

    const double x = std::sin(theta / 2.0) * std::sin(theta / 2.0);
    const int w_max = (two_j - 1) / 2;
    const auto A = monge_detail::a_table(w_max, tol);

    const double log_x = x > 0.0 ? std::log(x) : -std::numeric_limits<double>::infinity();
    const double log_1mx =
        x < 1.0 ? std::log1p(-x) : -std::numeric_limits<double>::infinity();
    const double log4 = std::log(4.0);
    const double log_pref =
        std::log(two_j + 1.0) - (0.5 * two_j + 1.0) * log4;

    std::vector<double> log_terms;
    for (int w = 0; w <= w_max; ++w) {
        // log S_J(u, v), with (2J - 2w - 1)! = Gamma(2J - 2w)
        const double log_common = std::lgamma(two_j + 1.0) -
                                  std::lgamma(two_j - 2.0 * w) -
                                  std::lgamma(w + 2.0) - w * log4;
        for (int u = 0; u <= w; ++u) {
            const int v = w - u;
            if (u > 0 && x == 0.0) continue;
            if (v > 0 && x == 1.0) continue;
            const double log_s = log_common - std::lgamma(u + 1.0) - std::lgamma(v + 1.0);
            const double a_uv = A[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)];
            double lt = log_pref + log_s + std::log(a_uv);
            if (u > 0) lt += u * log_x;
            if (v > 0) lt += v * log_1mx;
            log_terms.push_back(lt);
        }
    }
    double peak = -std::numeric_limits<double>::infinity();
    for (double lt : log_terms) peak = std::max(peak, lt);
    double w_sum = 0.0;
    for (double lt : log_terms) w_sum += std::exp(lt - peak);
    w_sum *= std::exp(peak);

    eval.value = pi * std::sin(theta / 2.0) * w_sum;
    return eval;
}

// lim_{J -> inf} d_M(J; theta) = theta
inline double monge_large_j_limit(double theta) {
    if (!(theta >= 0.0 && theta <= pi))
        throw std::invalid_argument("monge_large_j_limit: theta outside [0, pi]");
    return theta;
}

struct MongeBound {
    bool holds = false;
    double margin = 0.0;  // d(a, b) - d_M
};

// d_M(|a>, |b>) <= d(a, b), with a 1e-9 slack for roundoff.
inline MongeBound check_monge_bound(int two_j, const SpherePoint& a,
                                    const SpherePoint& b) {
    const double d = geodesic_distance(a, b);
    const double dm = monge_su2(two_j, d).value;
    return {dm <= d + 1e-9, d - dm};
}

// ---------------------------------------------------------------------------
// Salvemini: 1-D transport distance as the integral of |Q1 - Q2|

// Integrates |cdf_a - cdf_b| over [lo, hi], then extends the window in
// doubling steps until the added mass falls below tol. A difference that
// keeps contributing raises an error (divergent input).
inline double salvemini(const std::function<double(double)>& cdf_a,
                        const std::function<double(double)>& cdf_b, double lo,
                        double hi, double tol = 1e-10) {
    auto diff = [&](double x) { return std::abs(cdf_a(x) - cdf_b(x)); };
    double total = integrate_1d(diff, lo, hi, tol);
    double width = std::max(hi - lo, 1.0);
    for (int round = 0; round < 40; ++round) {
        const double left = integrate_1d(diff, lo - width, lo, tol);
        const double right = integrate_1d(diff, hi, hi + width, tol);
        total += left + right;
        lo -= width;
        hi += width;
        if (left + right < tol) return total;
        width *= 2.0;
    }
    throw std::runtime_error("salvemini: CDF difference does not vanish (divergent)");
}

// ---------------------------------------------------------------------------
// Exact discrete transport oracle (transportation simplex)

// Minimum-cost transport between two discrete distributions with equal
// total mass. cost(i, j) returns the unit cost of moving mass from source
// i to sink j. Exact LP optimum via the transportation simplex.
inline double kantorovich_oracle(const std::vector<double>& supply,
                                 const std::vector<double>& demand,
                                 const std::function<double(int, int)>& cost) {
    const int m = static_cast<int>(supply.size());
    const int n = static_cast<int>(demand.size());
    if (m == 0 || n == 0)
        throw std::invalid_argument("kantorovich_oracle: empty distribution");
    double total_a = 0.0, total_b = 0.0;
    for (double s : supply) {
        if (s < 0.0) throw std::invalid_argument("kantorovich_oracle: negative mass");
        total_a += s;
    }
    for (double d : demand) {
        if (d < 0.0) throw std::invalid_argument("kantorovich_oracle: negative mass");
        total_b += d;
    }
    if (std::abs(total_a - total_b) > 1e-9 * std::max(total_a, total_b))
        throw std::invalid_argument("kantorovich_oracle: unequal total mass (infeasible)");

    // Costs are queried O(mn) per pivot; cache them when the matrix fits.
    std::vector<double> cost_cache;
    const bool cached = static_cast<long long>(m) * n <= 24'000'000;
    if (cached) {
        cost_cache.resize(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j)
                cost_cache[static_cast<std::size_t>(i) * n + j] = cost(i, j);
    }
    auto c_at = [&](int i, int j) {
        return cached ? cost_cache[static_cast<std::size_t>(i) * n + j] : cost(i, j);
    };

    // Basic cells form a spanning tree on rows + columns. flow/row/col are
    // parallel arrays over basic cells.
    struct Basic { int row, col; double flow; };
    std::vector<Basic> basis;
    basis.reserve(static_cast<std::size_t>(m + n));

    // Union-find over row nodes [0, m) and column nodes [m, m + n).
    std::vector<int> uf_parent(static_cast<std::size_t>(m + n));
    for (int node = 0; node < m + n; ++node)
        uf_parent[static_cast<std::size_t>(node)] = node;
    std::function<int(int)> uf_find = [&](int node) {
        while (uf_parent[static_cast<std::size_t>(node)] != node) {
            uf_parent[static_cast<std::size_t>(node)] =
                uf_parent[static_cast<std::size_t>(uf_parent[static_cast<std::size_t>(node)])];
            node = uf_parent[static_cast<std::size_t>(node)];
        }
        return node;
    };
    auto uf_union = [&](int x, int y) {
        uf_parent[static_cast<std::size_t>(uf_find(x))] = uf_find(y);
    };

    // Greedy matrix-minimum start: fill cheapest cells first. A cell is used
    // only while both its residuals are positive, and every assignment closes
    // at least one endpoint, so the positive cells always form a forest. The
    // start lands close to the optimum for metric costs, keeping the pivot
    // count low.
    {
        std::vector<double> a = supply, b = demand;
        std::vector<int> order;
        order.reserve(static_cast<std::size_t>(m) * static_cast<std::size_t>(n));
        for (int cell = 0; cell < m * n; ++cell) order.push_back(cell);
        std::sort(order.begin(), order.end(), [&](int lhs, int rhs) {
            return c_at(lhs / n, lhs % n) < c_at(rhs / n, rhs % n);
        });
        for (int cell : order) {
            const int i = cell / n, j = cell % n;
            double& ra = a[static_cast<std::size_t>(i)];
            double& rb = b[static_cast<std::size_t>(j)];
            if (ra <= 0.0 || rb <= 0.0) continue;
            const double f = std::min(ra, rb);
            basis.push_back({i, j, f});
            uf_union(i, m + j);
            if (ra <= rb) { rb -= ra; ra = 0.0; } else { ra -= rb; rb = 0.0; }
        }
        // Complete the forest into a spanning tree with zero-flow cells.
        for (int row = 1; row < m; ++row)
            if (uf_find(row) != uf_find(0)) {
                basis.push_back({row, basis.front().col, 0.0});
                uf_union(row, m + basis.front().col);
            }
        for (int col = 0; col < n; ++col)
            if (uf_find(m + col) != uf_find(0)) {
                basis.push_back({0, col, 0.0});
                uf_union(m + col, 0);
            }
    }

    std::vector<double> u(static_cast<std::size_t>(m)), v(static_cast<std::size_t>(n));
    std::vector<std::vector<int>> row_basic(static_cast<std::size_t>(m));
    std::vector<std::vector<int>> col_basic(static_cast<std::size_t>(n));

    auto rebuild_index = [&]() {
        for (auto& r : row_basic) r.clear();
        for (auto& c : col_basic) c.clear();
        for (int b = 0; b < static_cast<int>(basis.size()); ++b) {
            row_basic[static_cast<std::size_t>(basis[static_cast<std::size_t>(b)].row)]
                .push_back(b);
            col_basic[static_cast<std::size_t>(basis[static_cast<std::size_t>(b)].col)]
                .push_back(b);
        }
    };

    // Duals from the basis tree: u[0] = 0, u_i + v_j = c_ij on basic cells.
    auto compute_duals = [&]() {
        std::vector<char> row_done(static_cast<std::size_t>(m), 0);
        std::vector<char> col_done(static_cast<std::size_t>(n), 0);
        std::vector<int> stack;
        u[0] = 0.0;
        row_done[0] = 1;
        stack.push_back(~0);  // ~row encodes a row node, col >= 0 a column
        while (!stack.empty()) {
            const int node = stack.back();
            stack.pop_back();
            if (node < 0) {
                const int i = ~node;
                for (int b : row_basic[static_cast<std::size_t>(i)]) {
                    const int j = basis[static_cast<std::size_t>(b)].col;
                    if (!col_done[static_cast<std::size_t>(j)]) {
                        v[static_cast<std::size_t>(j)] =
                            c_at(i, j) - u[static_cast<std::size_t>(i)];
                        col_done[static_cast<std::size_t>(j)] = 1;
                        stack.push_back(j);
                    }
                }
            } else {
                const int j = node;
                for (int b : col_basic[static_cast<std::size_t>(j)]) {
                    const int i = basis[static_cast<std::size_t>(b)].row;
                    if (!row_done[static_cast<std::size_t>(i)]) {
                        u[static_cast<std::size_t>(i)] =
                            c_at(i, j) - v[static_cast<std::size_t>(j)];
                        row_done[static_cast<std::size_t>(i)] = 1;
                        stack.push_back(~i);
                    }
                }
            }
        }
    };

    // Cycle search: path in the basis tree from the entering row to the
    // entering column, via DFS alternating row/column moves.
    auto find_cycle = [&](int er, int ec) {
        // parent[b] chain reconstruction over basic cells
        std::vector<int> parent(basis.size(), -2);
        std::vector<int> frontier;  // basic-cell ids whose endpoints expand
        std::vector<char> row_seen(static_cast<std::size_t>(m), 0);
        std::vector<char> col_seen(static_cast<std::size_t>(n), 0);
        row_seen[static_cast<std::size_t>(er)] = 1;
        int found = -1;
        for (int b : row_basic[static_cast<std::size_t>(er)]) {
            parent[static_cast<std::size_t>(b)] = -1;
            frontier.push_back(b);
        }
        while (!frontier.empty() && found < 0) {
            const int b = frontier.back();
            frontier.pop_back();
            const auto& cell = basis[static_cast<std::size_t>(b)];
            if (cell.col == ec) { found = b; break; }
            if (!col_seen[static_cast<std::size_t>(cell.col)]) {
                col_seen[static_cast<std::size_t>(cell.col)] = 1;
                for (int nb : col_basic[static_cast<std::size_t>(cell.col)]) {
                    if (parent[static_cast<std::size_t>(nb)] == -2 && nb != b) {
                        const auto& ncell = basis[static_cast<std::size_t>(nb)];
                        if (!row_seen[static_cast<std::size_t>(ncell.row)]) {
                            parent[static_cast<std::size_t>(nb)] = b;
                            frontier.push_back(nb);
                        }
                    }
                }
            }
            if (!row_seen[static_cast<std::size_t>(cell.row)]) {
                row_seen[static_cast<std::size_t>(cell.row)] = 1;
                for (int nb : row_basic[static_cast<std::size_t>(cell.row)]) {
                    if (parent[static_cast<std::size_t>(nb)] == -2 && nb != b) {
                        parent[static_cast<std::size_t>(nb)] = b;
                        frontier.push_back(nb);
                    }
                }
            }
        }
        std::vector<int> path;
        for (int b = found; b >= 0; b = parent[static_cast<std::size_t>(b)])
            path.push_back(b);
        std::reverse(path.begin(), path.end());
        return path;
    };

    const int max_iters = 50 * (m + n) + 10000;
    for (int iter = 0; iter < max_iters; ++iter) {
        rebuild_index();
        compute_duals();

        // Pricing: most negative reduced cost.
        int er = -1, ec = -1;
        double best = -1e-12;
        for (int i = 0; i < m; ++i) {
            const double ui = u[static_cast<std::size_t>(i)];
            const double* row =
                cached ? &cost_cache[static_cast<std::size_t>(i) * n] : nullptr;
            for (int j = 0; j < n; ++j) {
                const double c = row ? row[j] : cost(i, j);
                const double rc = c - ui - v[static_cast<std::size_t>(j)];
                if (rc < best) { best = rc; er = i; ec = j; }
            }
        }
        if (er < 0) break;  // optimal

        // The path alternates col-moves and row-moves; cells at even
        // positions along the cycle (starting from the entering cell)
        // gain flow, odd positions lose it.
        const std::vector<int> path = find_cycle(er, ec);
        if (path.empty())
            throw std::logic_error("kantorovich_oracle: basis tree disconnected");

        double theta = std::numeric_limits<double>::infinity();
        int leave_pos = -1;
        for (std::size_t p = 0; p < path.size(); p += 2) {
            const double f = basis[static_cast<std::size_t>(path[p])].flow;
            if (f < theta) { theta = f; leave_pos = static_cast<int>(p); }
        }
        for (std::size_t p = 0; p < path.size(); ++p) {
            auto& cell = basis[static_cast<std::size_t>(path[p])];
            cell.flow += (p % 2 == 0) ? -theta : theta;
        }
        auto& leaving = basis[static_cast<std::size_t>(path[static_cast<std::size_t>(leave_pos)])];
        leaving.row = er;
        leaving.col = ec;
        leaving.flow = theta;
    }

    double total = 0.0;
    for (const auto& cell : basis) total += cell.flow * c_at(cell.row, cell.col);
    return total;
}

// ---------------------------------------------------------------------------
// Spherical discretization of a Husimi function for the transport oracle

struct DiscreteSphereDistribution {
    std::vector<SpherePoint> points;  // cell centers
    std::vector<double> masses;       // normalized to 1
};

// Cell-midpoint discretization of the normalized Husimi density on an
// n_theta x 2 n_theta latitude/longitude grid. Cells below prune (relative
// to the largest cell) are dropped and the rest renormalized.
inline DiscreteSphereDistribution discretize_husimi(int two_j, const SpherePoint& sigma,
                                                    int n_theta,
                                                    double prune = 1e-12) {
    const int n_phi = 2 * n_theta;
    const double dt = pi / n_theta;
    const double dp = 2.0 * pi / n_phi;
    const double density = measure_density(two_j);
    DiscreteSphereDistribution out;
    std::vector<double> raw;
    std::vector<SpherePoint> pts;
    double peak = 0.0;
    for (int it = 0; it < n_theta; ++it) {
        const double t_lo = it * dt, t_hi = t_lo + dt;
        const double tc = 0.5 * (t_lo + t_hi);
        const double band = std::cos(t_lo) - std::cos(t_hi);
        for (int ip = 0; ip < n_phi; ++ip) {
            const SpherePoint center(tc, (ip + 0.5) * dp);
            const double mass = density * husimi(two_j, sigma, center) * band * dp;
            raw.push_back(mass);
            pts.push_back(center);
            peak = std::max(peak, mass);
        }
    }
    double total = 0.0;
    for (std::size_t c = 0; c < raw.size(); ++c) {
        if (raw[c] >= prune * peak) {
            out.points.push_back(pts[c]);
            out.masses.push_back(raw[c]);
            total += raw[c];
        }
    }
    for (double& mass : out.masses) mass /= total;
    return out;
}

// Oracle value of the Monge distance between two su(2) coherent states,
// solving the full 2-D discrete transport problem (no symmetry assumed).
inline double monge_oracle_su2(int two_j, const SpherePoint& a, const SpherePoint& b,
                               int n_theta, double prune = 1e-9) {
    const auto da = discretize_husimi(two_j, a, n_theta, prune);
    const auto db = discretize_husimi(two_j, b, n_theta, prune);
    auto cost = [&](int i, int j) {
        return geodesic_distance(da.points[static_cast<std::size_t>(i)],
                                 db.points[static_cast<std::size_t>(j)]);
    };
    return kantorovich_oracle(da.masses, db.masses, cost);
}

}  // namespace classicality

#endif  // CLASSICALITY_MONGE_HPP
