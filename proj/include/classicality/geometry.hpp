#ifndef CLASSICALITY_GEOMETRY_HPP
#define CLASSICALITY_GEOMETRY_HPP

// Spherical geometry: points on S2, great-circle distance, and the
// latitude/longitude tessellation T(k) with its sampled points, tile
// adjacency, patches and the two resolution parameters (inscribed and
// strict delta).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace classicality {

inline constexpr double pi = std::numbers::pi_v<double>;

// ---------------------------------------------------------------------------
// SpherePoint

// Colatitude/longitude point on the unit sphere. theta in [0, pi],
// phi normalized into [0, 2*pi). Poles are canonicalized to phi = 0.
struct SpherePoint {
    double theta = 0.0;
    double phi = 0.0;

    SpherePoint() = default;
    SpherePoint(double theta_, double phi_) : theta(theta_), phi(phi_) {
        if (!(theta >= 0.0 && theta <= pi))
            throw std::invalid_argument("SpherePoint: theta outside [0, pi]");
        phi = std::fmod(phi, 2.0 * pi);
        if (phi < 0.0) phi += 2.0 * pi;
        if (theta == 0.0 || theta == pi) phi = 0.0;
    }

    friend bool operator==(const SpherePoint& a, const SpherePoint& b) {
        return a.theta == b.theta && a.phi == b.phi;
    }
};

// Great-circle distance with the colatitude convention:
//   cos D = cos ta * cos tb + sin ta * sin tb * cos(pa - pb)
inline double geodesic_distance(const SpherePoint& a, const SpherePoint& b) {
    const double c = std::cos(a.theta) * std::cos(b.theta) +
                     std::sin(a.theta) * std::sin(b.theta) *
                         std::cos(a.phi - b.phi);
    return std::acos(std::clamp(c, -1.0, 1.0));
}

// ---------------------------------------------------------------------------
// Tiles

enum class Pole { north, south };

struct PolarCap {
    Pole pole;
    double radius;  // angular radius in radians
};

struct LatLonCell {
    double theta_lo, theta_hi;  // colatitude interval
    double phi_lo, phi_hi;      // longitude interval
};

struct Tile {
    int index = 0;  // 1-based
    std::variant<PolarCap, LatLonCell> kind;
    SpherePoint sampled_point;

    bool is_cap() const { return std::holds_alternative<PolarCap>(kind); }
    const PolarCap& cap() const { return std::get<PolarCap>(kind); }
    const LatLonCell& cell() const { return std::get<LatLonCell>(kind); }

    // Exact spherical area of the tile.
    double area() const {
        if (is_cap()) return 2.0 * pi * (1.0 - std::cos(cap().radius));
        const auto& c = cell();
        return (c.phi_hi - c.phi_lo) *
               (std::cos(c.theta_lo) - std::cos(c.theta_hi));
    }

    // True if p lies in the closed tile region.
    bool contains(const SpherePoint& p) const {
        if (is_cap()) {
            const double pole_theta = cap().pole == Pole::north ? 0.0 : pi;
            return std::abs(p.theta - pole_theta) <= cap().radius;
        }
        const auto& c = cell();
        if (p.theta < c.theta_lo || p.theta > c.theta_hi) return false;
        // phi interval, treating wrap at 2*pi
        double lo = c.phi_lo, hi = c.phi_hi, ph = p.phi;
        if (ph >= lo && ph <= hi) return true;
        // the seam tile ends exactly at 2*pi; phi = 0 is its upper edge
        return hi >= 2.0 * pi && ph <= hi - 2.0 * pi;
    }
};

struct Patch {
    int center_index = 0;
    std::set<int> member_indices;
};

// ---------------------------------------------------------------------------
// Distance from a point to a tile boundary / tile region

namespace detail {

// Distance from p to the meridian arc {phi = phi_arc, theta in [t_lo, t_hi]}.
inline double distance_to_meridian_arc(const SpherePoint& p, double phi_arc,
                                       double t_lo, double t_hi) {
    const double w = p.phi - phi_arc;
    // Foot of the perpendicular: tan t* = tan(theta_p) * cos(w), choosing
    // the branch on the same hemisphere as p.
    double t_star;
    const double tt = std::tan(p.theta) * std::cos(w);
    t_star = std::atan(tt);
    if (t_star < 0.0) t_star += pi;  // colatitude branch
    t_star = std::clamp(t_star, t_lo, t_hi);
    double best = geodesic_distance(p, SpherePoint(t_star, phi_arc));
    best = std::min(best, geodesic_distance(p, SpherePoint(t_lo, phi_arc)));
    best = std::min(best, geodesic_distance(p, SpherePoint(t_hi, phi_arc)));
    return best;
}

// Distance from p to the parallel arc {theta = t_arc, phi in [p_lo, p_hi]}.
inline double distance_to_parallel_arc(const SpherePoint& p, double t_arc,
                                       double p_lo, double p_hi) {
    // Nearest phi on the arc to p.phi, accounting for the 2*pi wrap.
    double ph = p.phi;
    double best_phi;
    if (ph >= p_lo && ph <= p_hi) {
        best_phi = ph;
    } else {
        auto circ = [](double a, double b) {
            double d = std::fmod(std::abs(a - b), 2.0 * pi);
            return std::min(d, 2.0 * pi - d);
        };
        best_phi = circ(ph, p_lo) <= circ(ph, p_hi) ? p_lo : p_hi;
    }
    return geodesic_distance(p, SpherePoint(t_arc, best_phi));
}

}  // namespace detail

// Distance from p to the boundary of tile t (zero only on the boundary).
inline double distance_to_tile_boundary(const SpherePoint& p, const Tile& t) {
    if (t.is_cap()) {
        const double pole_theta = t.cap().pole == Pole::north ? 0.0 : pi;
        return std::abs(std::abs(p.theta - pole_theta) - t.cap().radius);
    }
    const auto& c = t.cell();
    double best = detail::distance_to_parallel_arc(p, c.theta_lo, c.phi_lo, c.phi_hi);
    best = std::min(best, detail::distance_to_parallel_arc(p, c.theta_hi, c.phi_lo, c.phi_hi));
    best = std::min(best, detail::distance_to_meridian_arc(p, c.phi_lo, c.theta_lo, c.theta_hi));
    best = std::min(best, detail::distance_to_meridian_arc(p, c.phi_hi, c.theta_lo, c.theta_hi));
    return best;
}

// Distance from p to the (closed) tile region: 0 inside, else boundary distance.
inline double distance_to_tile(const SpherePoint& p, const Tile& t) {
    if (t.contains(p)) return 0.0;
    return distance_to_tile_boundary(p, t);
}

// ---------------------------------------------------------------------------
// Tessellation T(k)

// T(k): 2k+1 parallels at theta = pi/2 + l*D (l = -k..k, D = pi/(2k+1)),
// 2(2k+1) meridians at phi = m*D, two polar caps of radius D/2.
// L = 2(4k^2 + 2k + 1) tiles.
//
// Indexing: tile 1 is the band cell (l=0, m=2); indices 2..25 cover the
// 5x5 window of cells around it (patch ring first, then the outer ring),
// remaining band cells follow row-major (l outer, m inner), the two caps
// come last (north, then south).
class Tessellation {
public:
    explicit Tessellation(int k) : k_(k) {
        if (k < 1) throw std::invalid_argument("Tessellation: k must be >= 1");
        build();
    }

    int k() const { return k_; }
    double band_width() const { return pi / (2 * k_ + 1); }  // Delta
    std::size_t tile_count() const { return tiles_.size(); }
    const std::vector<Tile>& tiles() const { return tiles_; }

    const Tile& tile(int index) const {
        if (index < 1 || index > static_cast<int>(tiles_.size()))
            throw std::out_of_range("Tessellation: tile index out of range");
        return tiles_[static_cast<std::size_t>(index - 1)];
    }

    const std::set<int>& adjacency(int index) const {
        auto it = adjacency_.find(index);
        if (it == adjacency_.end())
            throw std::out_of_range("Tessellation: tile index out of range");
        return it->second;
    }

    Patch patch(int index) const {
        Patch p;
        p.center_index = index;
        p.member_indices = adjacency(index);
        p.member_indices.insert(index);
        return p;
    }

    // Band-cell index lookup by (l, m), l in [-k+1, k], m in [0, 2(2k+1)-1].
    int band_index(int l, int m) const {
        auto it = lm_to_index_.find({l, m});
        if (it == lm_to_index_.end())
            throw std::out_of_range("Tessellation: invalid (l, m)");
        return it->second;
    }
    int north_cap_index() const { return north_cap_index_; }
    int south_cap_index() const { return south_cap_index_; }

    // Tile containing p; exact boundary points resolve to the lowest
    // index among the tiles whose closure contains p.
    int locate(const SpherePoint& p) const {
        for (const Tile& t : tiles_)  // tiles_ is ascending in index
            if (t.contains(p)) return t.index;
        // Unreachable for valid points: the closed tiles cover S2.
        throw std::logic_error("Tessellation::locate: point not covered");
    }

private:
    int k_;
    std::vector<Tile> tiles_;  // position i holds index i+1
    std::map<int, std::set<int>> adjacency_;
    std::map<std::pair<int, int>, int> lm_to_index_;
    int north_cap_index_ = 0, south_cap_index_ = 0;

    void build() {
        const double D = band_width();
        const int mcount = 2 * (2 * k_ + 1);

        // Assign indices. The reference window is centered on (l=0, m=2).
        const int lc = 0, mc = 2;
        auto in_range = [&](int l, int m) {
            return l >= -k_ + 1 && l <= k_ && m >= 0 && m < mcount;
        };
        int next = 1;
        // rings of the 5x5 window around (lc, mc), row-major inside a ring
        for (int r = 0; r <= 2; ++r) {
            for (int l = lc - r; l <= lc + r; ++l) {
                for (int m = mc - r; m <= mc + r; ++m) {
                    if (std::max(std::abs(l - lc), std::abs(m - mc)) != r)
                        continue;
                    if (!in_range(l, m)) continue;
                    lm_to_index_[{l, m}] = next++;
                }
            }
        }
        for (int l = -k_ + 1; l <= k_; ++l)
            for (int m = 0; m < mcount; ++m)
                if (!lm_to_index_.count({l, m})) lm_to_index_[{l, m}] = next++;
        north_cap_index_ = next++;
        south_cap_index_ = next++;

        tiles_.resize(static_cast<std::size_t>(next - 1));
        for (const auto& [lm, idx] : lm_to_index_) {
            const auto [l, m] = lm;
            Tile t;
            t.index = idx;
            LatLonCell c;
            c.theta_lo = pi / 2.0 + (l - 1) * D;
            c.theta_hi = pi / 2.0 + l * D;
            c.phi_lo = m * D;
            c.phi_hi = (m + 1) * D;
            t.kind = c;
            t.sampled_point =
                SpherePoint(pi / 2.0 + (2 * l - 1) * D / 2.0, (2 * m + 1) * D / 2.0);
            tiles_[static_cast<std::size_t>(idx - 1)] = t;
        }
        {
            Tile north;
            north.index = north_cap_index_;
            north.kind = PolarCap{Pole::north, D / 2.0};
            north.sampled_point = SpherePoint(0.0, 0.0);
            tiles_[static_cast<std::size_t>(north_cap_index_ - 1)] = north;
            Tile south;
            south.index = south_cap_index_;
            south.kind = PolarCap{Pole::south, D / 2.0};
            south.sampled_point = SpherePoint(pi, 0.0);
            tiles_[static_cast<std::size_t>(south_cap_index_ - 1)] = south;
        }

        // Adjacency: boundary sharing, corner contact included.
        auto wrap_m = [&](int m) { return ((m % mcount) + mcount) % mcount; };
        for (int l = -k_ + 1; l <= k_; ++l) {
            for (int m = 0; m < mcount; ++m) {
                const int i = lm_to_index_[{l, m}];
                for (int dl = -1; dl <= 1; ++dl) {
                    for (int dm = -1; dm <= 1; ++dm) {
                        if (dl == 0 && dm == 0) continue;
                        const int ll = l + dl;
                        if (ll < -k_ + 1 || ll > k_) continue;
                        adjacency_[i].insert(lm_to_index_[{ll, wrap_m(m + dm)}]);
                    }
                }
                if (l == -k_ + 1) {
                    adjacency_[i].insert(north_cap_index_);
                    adjacency_[north_cap_index_].insert(i);
                }
                if (l == k_) {
                    adjacency_[i].insert(south_cap_index_);
                    adjacency_[south_cap_index_].insert(i);
                }
            }
        }
    }
};

inline Tessellation build_tessellation(int k) { return Tessellation(k); }

// ---------------------------------------------------------------------------
// Resolution parameters

// Radius of the largest circle centered at the sampled point and inscribed
// in its own tile, for one tile.
inline double tile_inradius(const Tile& t) {
    if (t.is_cap()) return t.cap().radius;
    return distance_to_tile_boundary(t.sampled_point, t);
}

// delta: the minimum tile inradius over the tessellation. For T(k) this
// equals arcsin(sin(D/2) * sin(D)) with D = pi/(2k+1).
inline double inscribed_delta(const Tessellation& tess) {
    double best = pi;
    for (const Tile& t : tess.tiles()) best = std::min(best, tile_inradius(t));
    return best;
}

namespace detail {

// One arc of a tile/patch boundary, parameterized on [0, 1].
struct BoundaryArc {
    bool is_parallel;  // constant theta if true, constant phi otherwise
    double fixed;      // the constant coordinate
    double lo, hi;     // range of the running coordinate

    SpherePoint at(double u) const {
        const double v = lo + u * (hi - lo);
        return is_parallel ? SpherePoint(fixed, v) : SpherePoint(v, fixed);
    }
};

inline std::vector<BoundaryArc> tile_boundary_arcs(const Tile& t) {
    if (t.is_cap()) {
        const double r = t.cap().radius;
        const double th = t.cap().pole == Pole::north ? r : pi - r;
        return {{true, th, 0.0, 2.0 * pi}};
    }
    const auto& c = t.cell();
    return {
        {true, c.theta_lo, c.phi_lo, c.phi_hi},
        {true, c.theta_hi, c.phi_lo, c.phi_hi},
        {false, c.phi_lo, c.theta_lo, c.theta_hi},
        {false, c.phi_hi, c.theta_lo, c.theta_hi},
    };
}

// Boundary of the union of the patch members: tile edges not shared with
// another member. Edge sharing is detected by midpoint membership tests on
// a slightly offset probe point.
inline std::vector<BoundaryArc> patch_boundary_arcs(const Tessellation& tess,
                                                    const Patch& p) {
    std::vector<BoundaryArc> out;
    auto member_covers = [&](const SpherePoint& q, int self) {
        for (int j : p.member_indices)
            if (j != self && tess.tile(j).contains(q)) return true;
        return false;
    };
    const double eps = 1e-9;
    for (int i : p.member_indices) {
        const Tile& t = tess.tile(i);
        for (const BoundaryArc& arc : tile_boundary_arcs(t)) {
            // Other members may cover only part of the arc (a cap circle
            // against a few band cells), so split it wherever a member
            // edge crosses before classifying each piece.
            std::vector<double> cuts = {arc.lo, arc.hi};
            for (int j : p.member_indices) {
                if (j == i) continue;
                const Tile& other = tess.tile(j);
                if (other.is_cap()) {
                    const double r = other.cap().radius;
                    if (!arc.is_parallel) cuts.insert(cuts.end(), {r, pi - r});
                } else if (arc.is_parallel) {
                    cuts.insert(cuts.end(),
                                {other.cell().phi_lo, other.cell().phi_hi});
                } else {
                    cuts.insert(cuts.end(),
                                {other.cell().theta_lo, other.cell().theta_hi});
                }
            }
            std::sort(cuts.begin(), cuts.end());
            for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
                const double lo = std::max(cuts[s], arc.lo);
                const double hi = std::min(cuts[s + 1], arc.hi);
                if (hi - lo <= 1e-12) continue;
                const BoundaryArc piece{arc.is_parallel, arc.fixed, lo, hi};
                // Probe just outside the tile across this edge. The outward
                // direction follows from which edge of the tile the arc is:
                // coordinate comparisons stay exact where distance-based
                // probing would fall below acos resolution.
                const SpherePoint mid = piece.at(0.5);
                SpherePoint probe = mid;
                if (t.is_cap()) {
                    const double away = t.cap().pole == Pole::north ? eps : -eps;
                    probe = SpherePoint(mid.theta + away, mid.phi);
                } else if (arc.is_parallel) {
                    const double away = arc.fixed == t.cell().theta_lo ? -eps : eps;
                    probe = SpherePoint(std::clamp(mid.theta + away, 0.0, pi), mid.phi);
                } else {
                    const double away = arc.fixed == t.cell().phi_lo ? -eps : eps;
                    probe = SpherePoint(mid.theta, mid.phi + away);
                }
                if (!member_covers(probe, i)) out.push_back(piece);
            }
        }
    }
    return out;
}

// Minimum distance between two arcs: sampled scan plus local refinement.
inline double arc_pair_min_distance(const BoundaryArc& a, const BoundaryArc& b,
                                    int samples) {
    double best = pi;
    double bu = 0.0, bv = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double u = static_cast<double>(i) / samples;
        const SpherePoint pa = a.at(u);
        for (int j = 0; j <= samples; ++j) {
            const double v = static_cast<double>(j) / samples;
            const double d = geodesic_distance(pa, b.at(v));
            if (d < best) { best = d; bu = u; bv = v; }
        }
    }
    // Local coordinate-descent refinement around the best sample.
    double span = 1.0 / samples;
    for (int it = 0; it < 60; ++it) {
        bool improved = false;
        for (int axis = 0; axis < 2; ++axis) {
            for (double s : {-span, span}) {
                double u = bu + (axis == 0 ? s : 0.0);
                double v = bv + (axis == 1 ? s : 0.0);
                u = std::clamp(u, 0.0, 1.0);
                v = std::clamp(v, 0.0, 1.0);
                const double d = geodesic_distance(a.at(u), b.at(v));
                if (d < best) { best = d; bu = u; bv = v; improved = true; }
            }
        }
        if (!improved) span *= 0.5;
        if (span < 1e-12) break;
    }
    return best;
}

}  // namespace detail

// Minimum distance between the boundary of tile i and the boundary of its
// patch, over all tiles; refined until stable to refine_tol.
inline double min_boundary_to_patch_boundary(const Tessellation& tess,
                                             double refine_tol = 1e-6) {
    double best = pi;
    for (const Tile& t : tess.tiles()) {
        const auto tile_arcs = detail::tile_boundary_arcs(t);
        const auto patch_arcs =
            detail::patch_boundary_arcs(tess, tess.patch(t.index));
        // Coarse scan finds the right basin; local refinement polishes it.
        // The scan density doubles until the result is stable.
        double prev = -1.0;
        for (int samples = 24; samples <= 192; samples *= 2) {
            double cur = pi;
            for (const auto& a : tile_arcs)
                for (const auto& b : patch_arcs)
                    cur = std::min(cur,
                                   detail::arc_pair_min_distance(a, b, samples));
            if (prev >= 0.0 && std::abs(cur - prev) < refine_tol) {
                prev = cur;
                break;
            }
            prev = cur;
        }
        best = std::min(best, prev);
    }
    return best;
}

// Strict delta: min(inscribed delta, boundary-to-patch-boundary minimum).
inline double strict_delta(const Tessellation& tess, double refine_tol = 1e-6) {
    return std::min(inscribed_delta(tess),
                    min_boundary_to_patch_boundary(tess, refine_tol));
}

}  // namespace classicality

#endif  // CLASSICALITY_GEOMETRY_HPP
