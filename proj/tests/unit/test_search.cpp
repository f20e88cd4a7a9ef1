#include <cmath>
#include <random>
#include <tuple>

#include "doctest.h"
#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/search.hpp"
#include "mildrep/transport.hpp"

using namespace mildrep;

TEST_CASE("a steady two-Dirac start is returned unchanged") {
    for (double m : {0.2, 0.5}) {
        const Potential pot(4, 2.5);
        const auto rho = DiscreteMeasure::two_dirac(m);
        const auto res = local_minimize(pot, rho);
        CHECK(res.converged);
        CHECK(atomwise_distance(res.minimizer, canonicalize(rho)) <= 1e-14);
        CHECK(res.energy == doctest::Approx(m * (1 - m) * pot.value(1.0)).epsilon(1e-14));
    }
}

TEST_CASE("two atoms at distance 1/2 relax to distance 1") {
    const Potential pot(3, 2);
    const Atom pair[] = {{0, 0.5}, {0.5, 0.5}};
    SearchOptions opts;
    opts.record_trace = true;
    const auto res = local_minimize(pot, DiscreteMeasure::from_atoms(pair), opts);
    CHECK(res.converged);
    CHECK(res.residual <= opts.tol);
    CHECK(d_inf(res.minimizer, DiscreteMeasure::two_dirac(0.5)) <= 1e-9);
    CHECK(res.energy == doctest::Approx(-1.0 / 24).epsilon(1e-12));
    REQUIRE(res.energy_trace.size() >= 2);
    // Newton polish steps may sit at rounding level above the previous energy.
    for (std::size_t i = 1; i < res.energy_trace.size(); ++i) {
        CHECK(res.energy_trace[i] <= res.energy_trace[i - 1] + 1e-15);
    }
}

TEST_CASE("descent is monotone and results are consistent on random starts") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> pos(0, 1.4), mass(0.1, 1);
    const double ps[] = {2.5, 4, 6};
    for (int t = 0; t < 30; ++t) {
        const Potential pot(ps[t % 3], 2.0 + 0.2 * (t % 2));
        std::vector<Atom> atoms(2 + t % 5);
        for (auto& a : atoms) a = {pos(rng), mass(rng)};
        SearchOptions opts;
        opts.record_trace = true;
        opts.optimize_masses = (t % 2 == 0);
        opts.tol = 1e-9;
        const auto res = local_minimize(pot, DiscreteMeasure::from_atoms(atoms), opts);
        for (std::size_t i = 1; i < res.energy_trace.size(); ++i) {
            CHECK(res.energy_trace[i] <= res.energy_trace[i - 1] + 1e-15);
        }
        CHECK(res.energy == doctest::Approx(interaction_energy(pot, res.minimizer)).epsilon(1e-12));
        CHECK(res.minimizer[0].position == 0.0);
        if (res.converged) {
            CHECK(res.residual <= opts.tol);
            CHECK(res.minimizer.diameter() <= pot.zero_radius() + 1e-6);
        }
    }
}

TEST_CASE("global search at p = 3, q = 2 with two atoms finds the half-half state") {
    const Potential pot(3, 2);
    const auto res = global_search(pot, 2, 8, 5);
    CHECK(res.starts == 8);
    CHECK(res.converged);
    CHECK(res.energy == doctest::Approx(-1.0 / 24).epsilon(1e-9));
    CHECK(d_inf(res.minimizer, DiscreteMeasure::two_dirac(0.5)) <= 1e-3);
}

TEST_CASE("global search beats the two-Dirac state at p = 2.5, q = 2.1") {
    const Potential pot(2.5, 2.1);
    const auto res = global_search(pot, 6, 64, 1);
    CHECK(res.energy <= -0.01924);
    CHECK(res.minimizer.diameter() <= pot.zero_radius() + 1e-6);
}

TEST_CASE("global search at large p respects the support lemmas") {
    const Potential pot(30, 2);
    const auto res = global_search(pot, 6, 12, 3);
    const double r = pot.inflection_radius(), l = pot.gap();
    CHECK(res.minimizer.diameter() <= pot.zero_radius() + 1e-6);
    double left = 0, right = 0;
    for (const auto& a : res.minimizer.atoms()) {
        CHECK_FALSE((a.position > l + 1e-6 && a.position < r - 1e-6));
        (a.position <= l + 1e-6 ? left : right) += a.mass;
    }
    const auto bound = mass_ratio_bound(pot);
    REQUIRE(bound.has_value());
    REQUIRE(left > 0);
    REQUIRE(right > 0);
    CHECK(std::max(left / right, right / left) <= *bound + 1e-6);
}

TEST_CASE("global search is deterministic and independent of thread count") {
    const Potential pot(4, 2);
    SearchOptions one, many;
    one.threads = 1;
    many.threads = 4;
    const auto a = global_search(pot, 4, 6, 99, one);
    const auto b = global_search(pot, 4, 6, 99, many);
    CHECK(a.best_start_index == b.best_start_index);
    CHECK(a.energy == b.energy);
    CHECK(a.minimizer == b.minimizer);
    CHECK_THROWS_AS(global_search(pot, 0, 4, 1), DomainError);
    CHECK_THROWS_AS(global_search(pot, 3, 0, 1), DomainError);
}

TEST_CASE("probe finds no descent around strict minimizers") {
    for (auto [p, q, m] : {std::tuple{4.0, 3.0, 0.5}, {4.0, 2.0, 0.5}, {4.0, 3.0, 0.2}}) {
        const Potential pot(p, q);
        const double eps = 1e-2;
        const auto probe = perturb_probe(pot, DiscreteMeasure::two_dirac(m), eps, 2000, 7);
        CHECK_FALSE(probe.found_descent);
        CHECK_FALSE(probe.witness.has_value());
        CHECK(probe.delta >= -1e-12);
        CHECK(std::abs(probe.delta) <= 10 * eps * eps);
        CHECK(probe.evaluated >= 2000);
    }
}

TEST_CASE("probe finds descent around a saddle within the ball") {
    const Potential pot(4, 2);
    const auto rho = DiscreteMeasure::two_dirac(0.9);
    const double eps = 1e-2;
    const auto probe = perturb_probe(pot, rho, eps, 500, 8);
    CHECK(probe.found_descent);
    REQUIRE(probe.witness.has_value());
    CHECK(probe.delta < -1e-12);
    CHECK(d_inf(*probe.witness, rho) <= eps + 1e-15);
    CHECK(interaction_energy(pot, *probe.witness) - interaction_energy(pot, rho) == doctest::Approx(probe.delta));
    CHECK_THROWS_AS(perturb_probe(pot, rho, 0.0, 10, 1), DomainError);
}
