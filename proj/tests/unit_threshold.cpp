// Threshold ensemble sizes for the three algebras, the inverse map from a
// target size to a resolution, and the geometric discrimination checks on
// the tessellation.

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "classicality/gcs.hpp"
#include "classicality/geometry.hpp"
#include "classicality/threshold.hpp"

using namespace classicality;

namespace {
const SpherePoint lambda1(4 * pi / 9, 5 * pi / 18);
}

TEST_CASE("su(2) threshold: reference values", "[threshold]") {
    const double d4 = inscribed_delta(build_tessellation(4));
    // [DERIVED] ln(eps) / ln(cos(delta/2)) + n, then ceiling.
    CHECK_THAT(nt_su2(0.22, d4, 0), Catch::Matchers::WithinAbs(3429.520987745745, 1e-6));
    CHECK(integer_threshold(nt_su2(0.22, d4, 0)) == 3430);
    CHECK_THAT(nt_su2(0.22, pi / 18, 0),
               Catch::Matchers::WithinAbs(397.14195664831334, 1e-8));
    CHECK(integer_threshold(nt_su2(0.22, pi / 18, 0)) == 398);
    // Discarded subsystems shift the threshold additively.
    CHECK_THAT(nt_su2(0.22, d4, 10), Catch::Matchers::WithinAbs(nt_su2(0.22, d4, 0) + 10, 1e-9));
    CHECK_THROWS_AS(nt_su2(0.22, pi, 0), std::invalid_argument);
    CHECK_THROWS_AS(nt_su2(0.0, 0.1, 0), std::invalid_argument);
}

TEST_CASE("su(1,1) threshold: reference values and Bargmann scaling", "[threshold]") {
    const double d4 = inscribed_delta(build_tessellation(4));
    // [DERIVED] -ln(eps) / (2k ln cosh(delta/2)).
    CHECK_THAT(nt_su11(0.22, d4, 0.5),
               Catch::Matchers::WithinAbs(3430.530406249981, 1e-6));
    CHECK_THAT(nt_su11(0.22, d4, 1.0),
               Catch::Matchers::WithinAbs(1715.2652031249904, 1e-6));
    // Doubling the Bargmann index halves the threshold.
    CHECK_THAT(nt_su11(0.22, 0.3, 2.0) * 2.0,
               Catch::Matchers::WithinAbs(nt_su11(0.22, 0.3, 1.0), 1e-9));
    // Vanishing resolution blows the threshold up.
    CHECK(nt_su11(0.22, 1e-6, 0.5) > 1e12);
    CHECK_THROWS_AS(nt_su11(0.22, 0.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(nt_su11(0.22, 0.1, 0.0), std::invalid_argument);
}

TEST_CASE("bosonic threshold: reference values", "[threshold]") {
    // [TRIVIAL] -ln(e^-1) / 0.01 = 100.
    CHECK_THAT(nt_boson(std::exp(-1.0), 0.1), Catch::Matchers::WithinAbs(100.0, 1e-9));
    const double d4 = inscribed_delta(build_tessellation(4));
    // [DERIVED]
    CHECK_THAT(nt_boson(0.22, d4), Catch::Matchers::WithinAbs(428.7532176945553, 1e-8));
    // eps -> 1 sends the threshold to zero.
    CHECK(nt_boson(0.999999, 0.1) < 1e-3);
    CHECK_THROWS_AS(nt_boson(0.22, 0.0), std::invalid_argument);
}

TEST_CASE("small-resolution asymptotics", "[threshold]") {
    // nt_su2 ~ -8 ln(eps) / delta^2 and nt_boson ~ -ln(eps) / delta^2.
    const double delta = 1e-3;
    CHECK_THAT(nt_su2(0.22, delta, 0) * delta * delta / (-std::log(0.22)),
               Catch::Matchers::WithinAbs(8.0, 1e-4));
    CHECK_THAT(nt_boson(0.22, delta) * delta * delta / (-std::log(0.22)),
               Catch::Matchers::WithinAbs(1.0, 1e-12));
}

TEST_CASE("resolution for a target size: reference value and round trips",
          "[threshold]") {
    // [DERIVED] 2 arccos(exp(ln(eps) / (Nt - n))).
    CHECK_THAT(delta_for_nt(0.22, 3285.0, 0),
               Catch::Matchers::WithinAbs(0.06071908248950295, 1e-12));
    CHECK_THAT(delta_for_nt(0.22, 3430.0, 0),
               Catch::Matchers::WithinAbs(0.05942199627249142, 1e-12));

    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> ueps(0.05, 0.9), unt(5.0, 1e5);
    for (int trial = 0; trial < 200; ++trial) {
        const double eps = ueps(rng), nt = unt(rng);
        const double delta = delta_for_nt(eps, nt, 0);
        REQUIRE_THAT(nt_su2(eps, delta, 0) / nt, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
    CHECK_THROWS_AS(delta_for_nt(0.22, 5.0, 5), std::invalid_argument);
    CHECK_THROWS_AS(delta_for_nt(0.22, 4.0, 5), std::invalid_argument);
}

TEST_CASE("threshold is the exact tipping point of the implication", "[threshold]") {
    const double d4 = inscribed_delta(build_tessellation(4));
    CHECK(verify_implication_su2(3430, 0.22, d4));
    CHECK_FALSE(verify_implication_su2(300, 0.22, d4));
    CHECK_FALSE(verify_implication_su2(30, 0.22, d4));

    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> ueps(0.05, 0.9), udelta(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        const double eps = ueps(rng), delta = udelta(rng);
        const long long nt = integer_threshold(nt_su2(eps, delta, 0));
        CAPTURE(eps, delta, nt);
        REQUIRE(verify_implication_su2(static_cast<int>(nt), eps, delta));
        REQUIRE(verify_implication_su2(static_cast<int>(nt) + 5, eps, delta));
        if (nt >= 3)
            REQUIRE_FALSE(verify_implication_su2(static_cast<int>(nt) - 2, eps, delta));
    }
}

TEST_CASE("thresholds shrink with coarser gauges", "[threshold]") {
    CHECK(nt_su2(0.22, 0.1, 0) > nt_su2(0.22, 0.2, 0));
    CHECK(nt_su2(0.1, 0.1, 0) > nt_su2(0.3, 0.1, 0));
    CHECK(nt_su11(0.22, 0.1, 0.5) > nt_su11(0.22, 0.2, 0.5));
    CHECK(nt_boson(0.22, 0.1) > nt_boson(0.22, 0.2));
}

TEST_CASE("tessellation discrimination: N = 3430 passes, smaller N fails",
          "[threshold]") {
    const Tessellation tess = build_tessellation(4);
    const SpherePoint probe = lambda1;

    // At the threshold size both conditions hold everywhere.
    const auto at = verify_tessellation_discrimination(tess, 3430, 0.22, {probe});
    CHECK(at.sampled.size() == tess.tile_count());
    CHECK(at.sampled_pass());
    CHECK(at.probes_pass());
    CHECK(at.worst_margin >= 0.0);

    // N = 300: the patch condition holds for the interior probe, but the
    // support cap no longer fits inside single tiles.
    const auto mid = verify_tessellation_discrimination(tess, 300, 0.22, {probe});
    CHECK(mid.probes_pass());
    CHECK_FALSE(mid.sampled_pass());
    CHECK_FALSE(mid.sampled[0].pass);  // tile 1's own sample already fails

    // N = 30: the cap outgrows even the patch.
    const auto low = verify_tessellation_discrimination(tess, 30, 0.22, {probe});
    CHECK_FALSE(low.sampled_pass());
    CHECK_FALSE(low.probes_pass());
}
