// POVM simulation: tile-by-tile Born probabilities by adaptive quadrature,
// the truncated (epsilon-masked) variant with its closed-form null outcome,
// and seeded sampling.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"
#include "classicality/povm.hpp"

using namespace classicality;

namespace {

const SpherePoint lambda1(4 * pi / 9, 5 * pi / 18);

Tile whole_sphere_tile() {
    Tile t;
    t.index = 1;
    t.kind = LatLonCell{0.0, pi, 0.0, 2.0 * pi};
    t.sampled_point = SpherePoint(pi / 2, pi);
    return t;
}

}  // namespace

TEST_CASE("region integral: whole sphere carries unit probability", "[povm]") {
    const Tile sphere = whole_sphere_tile();
    for (int two_j : {1, 30, 301}) {
        CHECK_THAT(integrate_husimi_over_region(two_j, SpherePoint(1.0, 2.0), sphere,
                                                std::nullopt, 1e-9),
                   Catch::Matchers::WithinAbs(1.0, 1e-7));
    }
}

TEST_CASE("region integral: mask fast paths", "[povm]") {
    const Tessellation tess = build_tessellation(4);
    const double r = epsilon_support_radius(3430, 0.22);

    // Cap disjoint from the tile: exactly zero, no quadrature.
    CHECK(integrate_husimi_over_region(3430, SpherePoint(0.0, 0.0), tess.tile(1), r,
                                       1e-8) == 0.0);

    // Cap strictly inside the tile: closed-form 1 - cos^(4J+2)(r/2),
    // cross-checked against the masked quadrature itself.
    const double closed =
        integrate_husimi_over_region(3430, lambda1, tess.tile(1), r, 1e-8);
    CHECK_THAT(closed, Catch::Matchers::WithinAbs(
                           -std::expm1((2.0 * 3430 + 2.0) *
                                       std::log(std::cos(r / 2.0))),
                           1e-15));
    CHECK_THAT(closed + p_null_closed(3430, 0.22), Catch::Matchers::WithinAbs(1.0, 1e-12));

    // Same cap integral by masked quadrature over the whole sphere.
    const double quad = integrate_husimi_over_region(3430, lambda1, whole_sphere_tile(),
                                                     r, 1e-9);
    CHECK_THAT(quad, Catch::Matchers::WithinAbs(closed, 1e-6));
}

TEST_CASE("region integral: refinement self-consistency", "[povm]") {
    const Tessellation tess = build_tessellation(4);
    const double coarse = effect_probability_exact(30, lambda1, tess, 1, 1e-6);
    const double fine = effect_probability_exact(30, lambda1, tess, 1, 1e-9);
    CHECK_THAT(coarse, Catch::Matchers::WithinAbs(fine, 1e-5));
}

TEST_CASE("exact table: completeness and symmetry", "[povm]") {
    const Tessellation tess = build_tessellation(2);
    const SpinEnsemble ens(30, 0);
    const ProbabilityTable table =
        probability_table(ens, lambda1, tess, TableMode::exact, 0.0, 1e-8);
    REQUIRE(table.entries.size() == tess.tile_count());
    CHECK(table.p_null == 0.0);
    CHECK_THAT(table.sum(), Catch::Matchers::WithinAbs(1.0, 1e-6));
    for (double p : table.entries) REQUIRE(p >= 0.0);

    // Reflection through Sigma's meridian maps cell m to cell 4 - m for
    // Sigma in the middle of m = 2 (k = 4 tessellation).
    const Tessellation t4 = build_tessellation(4);
    for (int l : {0, 1}) {
        const double left =
            effect_probability_exact(30, lambda1, t4, t4.band_index(l, 1), 1e-9);
        const double right =
            effect_probability_exact(30, lambda1, t4, t4.band_index(l, 3), 1e-9);
        CHECK_THAT(left, Catch::Matchers::WithinAbs(right, 1e-7));
    }
}

TEST_CASE("peaked state concentrates in its own tile", "[povm]") {
    const Tessellation tess = build_tessellation(4);
    const SpherePoint pole(0.0, 0.0);
    const double p_cap =
        effect_probability_exact(3430, pole, tess, tess.north_cap_index(), 1e-9);
    CHECK(p_cap > 1.0 - 1e-3);
}

TEST_CASE("truncated table: dominated by exact, completes with the null outcome",
          "[povm]") {
    const Tessellation tess = build_tessellation(4);
    const SpinEnsemble ens(30, 0);
    const ProbabilityTable exact =
        probability_table(ens, lambda1, tess, TableMode::exact, 0.0, 1e-8);
    const ProbabilityTable trunc =
        probability_table(ens, lambda1, tess, TableMode::truncated, 0.22, 1e-8);

    for (std::size_t t = 0; t < exact.entries.size(); ++t)
        REQUIRE(trunc.entries[t] <= exact.entries[t] + 1e-9);
    CHECK_THAT(trunc.p_null, Catch::Matchers::WithinAbs(p_null_closed(30, 0.22), 1e-15));
    CHECK_THAT(trunc.sum() + trunc.p_null, Catch::Matchers::WithinAbs(1.0, 1e-5));

    // With N = 30 the support cap leaks outside the 9-tile patch of tile 1.
    double outside = 0.0;
    const auto patch = tess.patch(1).member_indices;
    for (std::size_t t = 0; t < trunc.entries.size(); ++t)
        if (patch.count(static_cast<int>(t) + 1) == 0) outside += trunc.entries[t];
    CHECK(outside > 1e-4);
}

TEST_CASE("truncated table: large N collapses onto a single tile", "[povm]") {
    const Tessellation tess = build_tessellation(4);
    const SpinEnsemble ens(3430, 0);
    const ProbabilityTable table =
        probability_table(ens, lambda1, tess, TableMode::truncated, 0.22, 1e-8);
    CHECK_THAT(table.entry(1), Catch::Matchers::WithinAbs(1.0 - table.p_null, 1e-10));
    for (std::size_t t = 1; t < table.entries.size(); ++t) CHECK(table.entries[t] == 0.0);
}

TEST_CASE("null outcome: closed form against quadrature", "[povm]") {
    // [DERIVED] 0.22^(2 + 1/J).
    CHECK_THAT(p_null_closed(3430, 0.22),
               Catch::Matchers::WithinAbs(0.048357287789137185, 1e-15));
    CHECK_THAT(p_null_closed(30, 0.22),
               Catch::Matchers::WithinAbs(0.04375290299967672, 1e-15));
    CHECK_THAT(p_null_closed(2, 0.22), Catch::Matchers::WithinAbs(0.010648, 1e-15));
    CHECK_THROWS_AS(p_null_closed(30, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(p_null_closed(0, 0.22), std::invalid_argument);

    for (int two_j : {2, 30, 300, 3430}) {
        const double closed = p_null_closed(two_j, 0.22);
        const double quad = p_null_quadrature(two_j, 0.22, 1e-10);
        CHECK_THAT(quad / closed, Catch::Matchers::WithinAbs(1.0, 1e-6));
    }
    // epsilon -> 1 limit: p_null -> eps^2.
    CHECK_THAT(p_null_closed(100000, 0.22), Catch::Matchers::WithinAbs(0.22 * 0.22, 1e-4));
}

TEST_CASE("table generation is thread-count invariant", "[povm]") {
    const Tessellation tess = build_tessellation(2);
    const SpinEnsemble ens(30, 0);
    const ProbabilityTable one =
        probability_table(ens, lambda1, tess, TableMode::truncated, 0.22, 1e-8, 1);
    const ProbabilityTable four =
        probability_table(ens, lambda1, tess, TableMode::truncated, 0.22, 1e-8, 4);
    REQUIRE(one.entries.size() == four.entries.size());
    for (std::size_t t = 0; t < one.entries.size(); ++t)
        REQUIRE(one.entries[t] == four.entries[t]);
}

TEST_CASE("sampling: deterministic, degenerate, and chi-square consistent", "[povm]") {
    ProbabilityTable table;
    table.entries = {0.5, 0.3, 0.15};
    table.p_null = 0.05;

    // Same seed, same outcome.
    for (std::uint64_t seed : {1ULL, 42ULL, 977ULL})
        CHECK(sample_outcome(table, seed) == sample_outcome(table, seed));

    // All mass on one tile: that tile always fires.
    ProbabilityTable point;
    point.entries = {0.0, 1.0, 0.0};
    for (std::uint64_t seed = 0; seed < 200; ++seed)
        REQUIRE(sample_outcome(point, seed) == 2);

    // Chi-square over 40000 seeded draws, 4 categories (3 tiles + null),
    // dof = 3: critical value 11.345 at the 1% level.
    const int draws = 40000;
    std::vector<int> counts(4, 0);
    for (int d = 0; d < draws; ++d)
        ++counts[static_cast<std::size_t>(sample_outcome(table, static_cast<std::uint64_t>(d)))];
    const double expected[4] = {0.05 * draws, 0.5 * draws, 0.3 * draws, 0.15 * draws};
    double chi2 = 0.0;
    for (int c = 0; c < 4; ++c) {
        const double diff = counts[static_cast<std::size_t>(c)] - expected[c];
        chi2 += diff * diff / expected[c];
    }
    CHECK(chi2 < 11.345);
}
