#include <doctest.h>

#include <cmath>

#include "syncvar/markov.hpp"
#include "test_maps.hpp"

using namespace syncvar;

namespace {

// Transfer-operator invariance probe: at a point y in the interior of atom j,
// the invariant density must satisfy d(y) = sum over preimages x of
// d(x)/|T'(x)|, all in exact arithmetic.
void check_density_invariant(const PiecewiseAffineMap& map, const std::vector<Rational>& density) {
    for (int j = 0; j < map.atom_count(); ++j) {
        Rational y = (map.breakpoint(j) + map.breakpoint(j + 1)) / Rational(2);
        Rational pushed(0);
        for (int i = 0; i < map.atom_count(); ++i) {
            Rational lo = syncvar::min(map.image_left(i), map.image_right(i));
            Rational hi = syncvar::max(map.image_left(i), map.image_right(i));
            if (lo < y && y < hi)
                pushed += density[static_cast<size_t>(i)] / map.slope(i).abs();
        }
        CHECK(pushed == density[static_cast<size_t>(j)]);
    }
}

} // namespace

TEST_CASE("tent transition matrix is full") {
    auto m = validate_markov(testmaps::tent());
    REQUIRE(m.n == 2);
    CHECK(m.at(0, 0));
    CHECK(m.at(0, 1));
    CHECK(m.at(1, 0));
    CHECK(m.at(1, 1));
    CHECK(m.irreducible);
}

TEST_CASE("golden transition matrix drops one edge") {
    auto m = validate_markov(testmaps::golden());
    CHECK(m.at(0, 0));
    CHECK(m.at(0, 1));
    CHECK(m.at(1, 0));
    CHECK_FALSE(m.at(1, 1));
    CHECK(m.irreducible);
}

TEST_CASE("non-Markov maps are rejected with the offending atom") {
    // T(1/3-0) = 2/3 is not a breakpoint.
    auto bad = PiecewiseAffineMap::build({0, Rational(1, 3), 1}, {{0, Rational(2, 3)}, {0, 1}});
    CHECK_THROWS_WITH_AS(validate_markov(bad), doctest::Contains("atom 0"), ValidationError);
}

TEST_CASE("reducible maps are flagged") {
    auto m = validate_markov(testmaps::reducible());
    CHECK_FALSE(m.irreducible);
    CHECK(m.component_of[0] == m.component_of[1]);
    CHECK(m.component_of[2] != m.component_of[0]);
}

TEST_CASE("word counts") {
    auto tent = validate_markov(testmaps::tent());
    CHECK(tent.word_count(1) == 2);
    CHECK(tent.word_count(3) == 8);
    CHECK(tent.word_count(10) == 1024);

    auto golden = validate_markov(testmaps::golden());
    CHECK(golden.word_count(1) == 2);
    CHECK(golden.word_count(2) == 3);
    CHECK(golden.word_count(3) == 5);
    CHECK(golden.word_count(4) == 8);
    CHECK(golden.word_count(5) == 13);

    auto counts = golden.end_counts(4);
    CHECK(counts[0] + counts[1] == 8);
}

TEST_CASE("entropy enclosure of the full shift is exact") {
    auto e = topological_entropy(validate_markov(testmaps::tent()));
    CHECK(e.rho_lo == Rational(2));
    CHECK(e.rho_hi == Rational(2));
    CHECK(e.h.lo <= std::log(2.0));
    CHECK(std::log(2.0) <= e.h.hi);
    CHECK(e.h.width() <= 1e-12);
    CHECK(e.irreducible);
}

TEST_CASE("entropy enclosure of the golden shift brackets log of the golden ratio") {
    auto e = topological_entropy(validate_markov(testmaps::golden()));
    double target = std::log((1 + std::sqrt(5.0)) / 2);
    CHECK(e.rho_lo.to_double() <= (1 + std::sqrt(5.0)) / 2);
    CHECK((1 + std::sqrt(5.0)) / 2 <= e.rho_hi.to_double());
    CHECK(e.rho_hi - e.rho_lo <= Rational(1, 1000000000000L));
    CHECK(e.h.lo <= target);
    CHECK(target <= e.h.hi);
    CHECK(e.h.width() <= 1e-12);
}

TEST_CASE("entropy of a reducible matrix comes from its deepest component") {
    auto e = topological_entropy(validate_markov(testmaps::reducible()));
    CHECK_FALSE(e.irreducible);
    CHECK(e.rho_lo <= Rational(2));
    CHECK(Rational(2) <= e.rho_hi);
    CHECK(e.h.contains(std::log(2.0)));
}

TEST_CASE("growth envelope dominates word counts exactly") {
    for (const auto& map : {testmaps::tent(), testmaps::golden(), testmaps::mixed()}) {
        auto m = validate_markov(map);
        auto e = topological_entropy(m);
        REQUIRE(e.irreducible);
        REQUIRE(e.perron.size() == static_cast<size_t>(m.n));
        // M v <= beta v componentwise.
        for (int i = 0; i < m.n; ++i) {
            Rational row(0);
            for (int j = 0; j < m.n; ++j)
                if (m.at(i, j)) row += e.perron[static_cast<size_t>(j)];
            CHECK(row <= e.growth_beta * e.perron[static_cast<size_t>(i)]);
        }
        // Hence word_count(k) <= amplitude * beta^(k-1).
        for (int k = 1; k <= 12; ++k) {
            Rational bound = e.growth_amplitude * e.growth_beta.pow(static_cast<unsigned long>(k - 1));
            CHECK(Rational(mpz_class(m.word_count(k)), 1) <= bound);
        }
    }
}

TEST_CASE("invariant density of the tent map is Lebesgue") {
    auto map = testmaps::tent();
    auto acim = acim_and_lyapunov(map, validate_markov(map));
    REQUIRE(acim.weights.size() == 2);
    CHECK(acim.weights[0] == Rational(1, 4));
    CHECK(acim.weights[1] == Rational(3, 4));
    CHECK(acim.density[0] == Rational(1));
    CHECK(acim.density[1] == Rational(1));
    check_density_invariant(map, acim.density);
}

TEST_CASE("invariant density of the golden map") {
    auto map = testmaps::golden();
    auto acim = acim_and_lyapunov(map, validate_markov(map));
    // Solving d1 = d1/s1 + d2/s2 on atom 0, d2 = d1/s1 on atom 1 with
    // s1 = 3/2, s2 = 2 and total mass 1 gives d = (9/8, 3/4).
    CHECK(acim.density[0] == Rational(9, 8));
    CHECK(acim.density[1] == Rational(3, 4));
    CHECK(acim.weights[0] == Rational(3, 4));
    CHECK(acim.weights[1] == Rational(1, 4));
    check_density_invariant(map, acim.density);
}

TEST_CASE("invariant density of the mixed map satisfies the transfer identity") {
    auto map = testmaps::mixed();
    auto acim = acim_and_lyapunov(map, validate_markov(map));
    Rational total(0);
    for (const auto& w : acim.weights) total += w;
    CHECK(total == Rational(1));
    check_density_invariant(map, acim.density);
}

TEST_CASE("Lyapunov exponent closed forms") {
    auto tent = testmaps::tent();
    auto acim = acim_and_lyapunov(tent, validate_markov(tent));
    double expected = 0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0);
    CHECK(acim.lyapunov.lo <= expected);
    CHECK(expected <= acim.lyapunov.hi);
    CHECK(acim.lyapunov.width() <= 1e-10);

    auto golden = testmaps::golden();
    auto gacim = acim_and_lyapunov(golden, validate_markov(golden));
    double gexp = 0.75 * std::log(1.5) + 0.25 * std::log(2.0);
    CHECK(gacim.lyapunov.lo <= gexp);
    CHECK(gexp <= gacim.lyapunov.hi);
}

TEST_CASE("certified log and exp") {
    auto l2 = certified_log(Rational(2));
    CHECK(l2.lo <= 0.6931471805599453);
    CHECK(0.6931471805599453 <= l2.hi);
    CHECK(l2.width() <= 1e-13);

    auto l1 = certified_log(Rational(1));
    CHECK(l1.contains(0.0));

    auto lhalf = certified_log(Rational(1, 2));
    CHECK(lhalf.contains(-0.6931471805599453));

    auto e1 = certified_exp(Enclosure{1.0, 1.0});
    CHECK(e1.contains(2.718281828459045));
    auto em = certified_exp(l2);
    CHECK(em.contains(2.0));
    CHECK(em.width() <= 1e-12);
}

TEST_CASE("regime thresholds are ordered") {
    for (const auto& map : {testmaps::tent(), testmaps::doubling(), testmaps::golden(),
                            testmaps::mixed()}) {
        auto t = regime_thresholds(map);
        CHECK(t.gamma_lipschitz == t.K.inverse());
        CHECK(t.gamma_lipschitz <= t.gamma_variation_hi);
        CHECK(t.gamma_variation_lo <= t.gamma_variation_hi);
        // e^{-h} <= e^{-lyap} since lyap <= h.
        CHECK(t.gamma_variation_lo.to_double() <= t.gamma_lyapunov.hi + 1e-12);
        CHECK(t.gamma_lyapunov.hi <= 1.0);
        // lyap <= h_top <= log K.
        CHECK(t.acim.lyapunov.lo <= t.entropy.h.hi);
        CHECK(t.entropy.h.lo <= std::log(t.K.to_double()) + 1e-12);
    }
}

TEST_CASE("tent thresholds frozen values") {
    auto t = regime_thresholds(testmaps::tent());
    CHECK(t.K == Rational(4));
    CHECK(t.gamma_lipschitz == Rational(1, 4));
    CHECK(t.gamma_variation_lo == Rational(1, 2));
    CHECK(t.gamma_variation_hi == Rational(1, 2));
    double elyap = std::exp(-(0.25 * std::log(4.0) + 0.75 * std::log(4.0 / 3.0)));
    CHECK(t.gamma_lyapunov.lo <= elyap);
    CHECK(elyap <= t.gamma_lyapunov.hi);
}
