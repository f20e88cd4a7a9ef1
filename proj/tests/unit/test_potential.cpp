#include <cmath>
#include <random>

#include "doctest.h"
#include "mildrep/errors.hpp"
#include "mildrep/potential.hpp"

using namespace mildrep;

TEST_CASE("value at the unit distance is the well depth") {
    Potential pot(2.5, 2.1);
    CHECK(pot.eval(1.0) == doctest::Approx(-0.0761904762).epsilon(1e-9));
    CHECK(pot.well_depth() == doctest::Approx(pot.value(1.0)).epsilon(1e-15));
    CHECK(pot.eval(0.0) == 0.0);
    CHECK(pot.eval(0.0, 1) == 0.0);
}

TEST_CASE("derivatives at x = 1 and at the origin") {
    Potential cubic(3, 2);
    CHECK(cubic.eval(1.0, 2) == doctest::Approx(1.0));
    CHECK(cubic.eval(1.0, 3) == doctest::Approx(2.0));
    CHECK(cubic.eval(0.0, 2) == -1.0);
    CHECK(Potential(4, 3).eval(0.0, 2) == 0.0);
    CHECK(Potential(5, 4).eval(0.0, 3) == 0.0);
    CHECK_THROWS_AS(cubic.eval(0.0, 3), UndefinedValue);
    CHECK_THROWS_AS(Potential(4, 2.5).eval(0.0, 3), UndefinedValue);
}

TEST_CASE("bad arguments are rejected") {
    CHECK_THROWS_AS(Potential(2, 2), DomainError);
    CHECK_THROWS_AS(Potential(3, 1.5), DomainError);
    CHECK_THROWS_AS(Potential(std::nan(""), 2), DomainError);
    Potential pot(4, 2);
    CHECK_THROWS_AS(pot.eval(INFINITY), DomainError);
    CHECK_THROWS_AS(pot.eval(std::nan("")), DomainError);
    CHECK_THROWS_AS(pot.eval(1.0, 4), DomainError);
    CHECK_THROWS_AS(pot.eval(1.0, -1), DomainError);
}

TEST_CASE("relaxed constructor admits q below 2") {
    const auto pot = Potential::relaxed(2.2, 1.5);
    CHECK(pot.is_relaxed());
    CHECK_FALSE(Potential(3, 2).is_relaxed());
    CHECK(pot.value(1.0) == doctest::Approx(1 / 2.2 - 1 / 1.5));
    CHECK_THROWS_AS(Potential::relaxed(2, 3), DomainError);
}

TEST_CASE("radii for p = 4, q = 2") {
    const auto rr = Potential(4, 2).radii();
    CHECK(rr.inflection == doctest::Approx(0.5773502692).epsilon(1e-10));
    CHECK(rr.zero == doctest::Approx(1.4142135624).epsilon(1e-10));
    CHECK(rr.gap == doctest::Approx(0.8368632932).epsilon(1e-10));
}

TEST_CASE("radii approach 1 from both sides as p grows") {
    // At p = 20 the inflection radius is still 0.849, so p = 21 is the first
    // integer where both radii sit within 0.15 of 1.
    const Potential p21(21, 2);
    CHECK(std::abs(p21.inflection_radius() - 1) < 0.15);
    CHECK(std::abs(p21.zero_radius() - 1) < 0.15);
    CHECK(Potential(20, 2).inflection_radius() == doctest::Approx(0.84910).epsilon(1e-4));

    double prev_r = 0, prev_R = 1e9;
    for (double p : {3.0, 4.0, 6.0, 10.0, 20.0, 50.0, 200.0}) {
        const Potential pot(p, 2);
        CHECK(pot.inflection_radius() > prev_r);
        CHECK(pot.zero_radius() < prev_R);
        CHECK(pot.inflection_radius() < 1.0);
        CHECK(pot.zero_radius() > 1.0);
        CHECK(std::abs(pot.value(pot.zero_radius())) <= 1e-12);
        CHECK(std::abs(pot.second(pot.inflection_radius())) <= 1e-12 * std::max(1.0, p));
        prev_r = pot.inflection_radius();
        prev_R = pot.zero_radius();
    }
}

TEST_CASE("symmetry and sign pattern on a grid") {
    for (auto [p, q] : {std::pair{4.0, 2.0}, {2.5, 2.1}, {7.3, 3.4}, {20.0, 2.0}}) {
        const Potential pot(p, q);
        const double R = pot.zero_radius();
        for (int i = 1; i <= 400; ++i) {
            const double x = 2.5 * R * i / 400.0;
            CHECK(pot.value(-x) == pot.value(x));
            CHECK(pot.first(-x) == -pot.first(x));
            if (x < R - 1e-9) CHECK(pot.value(x) < 0);
            if (x > R + 1e-9) CHECK(pot.value(x) > 0);
            if (x < 1 - 1e-9) CHECK(pot.first(x) < 0);
            if (x > 1 + 1e-9) CHECK(pot.first(x) > 0);
            CHECK(pot.value(x) >= pot.value(1.0) - 1e-15);
        }
        CHECK(pot.first(1.0) == doctest::Approx(0.0).epsilon(1e-15));
    }
}

TEST_CASE("each derivative matches a central difference of the one below") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> qd(2.0, 4.0), gap(0.2, 6.0), xd(0.1, 2.0);
    for (int t = 0; t < 200; ++t) {
        const double q = qd(rng);
        const Potential pot(q + gap(rng), q);
        const double x = xd(rng);
        const double h = 1e-5;
        for (int k = 0; k <= 2; ++k) {
            const double fd = (pot.eval(x + h, k) - pot.eval(x - h, k)) / (2 * h);
            const double exact = pot.eval(x, k + 1);
            CHECK(std::abs(fd - exact) <= 1e-6 * std::max(1.0, std::abs(exact)));
        }
    }
}

TEST_CASE("lemma_c root for q = 2, k = 1 is the golden ratio conjugate") {
    const Potential pot(4, 2);
    const double c = lemma_c(pot, 1.0);
    CHECK(c == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-12));
    CHECK(std::abs(std::pow(c, 3) - c - (c - 1)) <= 1e-12);
    const double R = pot.zero_radius();
    for (int i = 0; i <= 1000; ++i) {
        const double x = c + (R - c) * i / 1000.0;
        CHECK((x - 1) * pot.first(x) >= (x - 1) * (x - 1) - 1e-14);
    }
}

TEST_CASE("lemma_c on other exponents and invalid k") {
    for (double k : {0.25, 0.5, 2.0, 3.0}) {
        const Potential pot(2 + k + 1, 2.5);
        const double c = lemma_c(pot, k);
        CHECK(c > 0);
        CHECK(c < 1);
        CHECK(std::abs(std::pow(c, 2.5 + k) - std::pow(c, 1.5) - k * (c - 1)) <= 1e-12);
    }
    CHECK_THROWS_AS(lemma_c(Potential(4, 2), 0.0), DomainError);
    CHECK_THROWS_AS(lemma_c(Potential(4, 2), -1.0), DomainError);
}

TEST_CASE("mass ratio bound") {
    CHECK_FALSE(mass_ratio_bound(Potential(2.5, 2.1)).has_value());
    // At p = 20 the gap is 0.287, which makes the denominator positive.
    CHECK_FALSE(mass_ratio_bound(Potential(20, 2)).has_value());
    CHECK(*mass_ratio_bound(Potential(25, 2)) == doctest::Approx(92.566).epsilon(1e-4));
    CHECK(*mass_ratio_bound(Potential(100, 2)) == doctest::Approx(1.81244).epsilon(1e-5));
    double prev = INFINITY;
    for (double p : {30.0, 50.0, 100.0, 200.0, 1000.0, 10000.0}) {
        const auto b = mass_ratio_bound(Potential(p, 2));
        REQUIRE(b.has_value());
        CHECK(*b >= 1.0);
        CHECK(*b < prev);
        prev = *b;
    }
    CHECK(prev < 1.02);
}
