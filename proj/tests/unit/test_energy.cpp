#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "doctest.h"
#include "mildrep/energy.hpp"

using namespace mildrep;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> pos(-1.5, 1.5), mass(0.05, 1);
    std::vector<Atom> a(n);
    for (auto& x : a) x = {pos(rng), mass(rng)};
    return DiscreteMeasure::from_atoms(a);
}

// Naive full double sum, including the diagonal.
double naive_energy(const Potential& pot, const DiscreteMeasure& mu) {
    double e = 0;
    for (const auto& a : mu.atoms()) {
        for (const auto& b : mu.atoms()) e += 0.5 * a.mass * b.mass * pot.value(a.position - b.position);
    }
    return e;
}

}  // namespace

TEST_CASE("three-atom reference energies") {
    const Potential pot(2.5, 2.1);
    const Atom three[] = {{0, 0.420137}, {0.548674, 0.159726}, {1.09735, 0.420137}};
    CHECK(std::abs(interaction_energy(pot, DiscreteMeasure::from_atoms(three)) - (-0.0192448)) <= 1e-6);
    CHECK(std::abs(interaction_energy(pot, DiscreteMeasure::two_dirac(0.5)) - (-0.0190476)) <= 1e-6);
    // Frozen value from an independent high-precision evaluation.
    CHECK(interaction_energy(pot, DiscreteMeasure::from_atoms(three)) ==
          doctest::Approx(-0.019244825783).epsilon(1e-10));
}

TEST_CASE("two-Dirac closed form and its minimum at m = 1/2") {
    for (double p : {2.5, 3.0, 4.0, 9.0}) {
        for (double q : {2.0, 2.2}) {
            const Potential pot(p, q);
            double best_m = 0, best_e = INFINITY;
            for (int i = 1; i < 100; ++i) {
                const double m = i / 100.0;
                const double e = interaction_energy(pot, DiscreteMeasure::two_dirac(m));
                CHECK(std::abs(e - m * (1 - m) * pot.value(1.0)) <= 1e-15);
                if (e < best_e) best_e = e, best_m = m;
            }
            CHECK(best_m == 0.5);
        }
    }
}

TEST_CASE("velocity field and steady residual") {
    const Potential cubic(3, 2);
    CHECK(velocity_field(cubic, DiscreteMeasure::dirac(0), 2.0) == doctest::Approx(-2.0));
    const Atom pair[] = {{0, 0.5}, {0.5, 0.5}};
    CHECK(steady_residual(cubic, DiscreteMeasure::from_atoms(pair)) == doctest::Approx(0.125));
    for (double m : {0.1, 0.5, 0.77}) {
        for (auto [p, q] : {std::pair{3.0, 2.0}, {6.5, 2.7}}) {
            const Potential pot(p, q);
            const auto rho = DiscreteMeasure::two_dirac(m);
            CHECK(velocity_field(pot, rho, 0.0) == 0.0);
            CHECK(steady_residual(pot, rho) <= 1e-14);
            for (double g : position_gradient(pot, rho)) CHECK(g == 0.0);
        }
    }
}

TEST_CASE("energy, symmetries and gradient identities on random measures") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < 100; ++t) {
        const Potential pot(2.3 + t % 5, 2.0 + 0.1 * (t % 3));
        const auto mu = random_measure(rng, 1 + t % 7);
        const double e = interaction_energy(pot, mu);
        CHECK(e == doctest::Approx(naive_energy(pot, mu)).epsilon(1e-12));
        CHECK(std::abs(e - interaction_energy(pot, canonicalize(mu))) <= 1e-12);

        const auto grad = position_gradient(pot, mu);
        REQUIRE(grad.size() == mu.size());
        CHECK(std::abs(std::accumulate(grad.begin(), grad.end(), 0.0)) <= 1e-12);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            CHECK(std::abs(grad[i] + mu[i].mass * velocity_field(pot, mu, mu[i].position)) <= 1e-12);
        }
        const double x = u(rng);
        CHECK(velocity_field(pot, mu.reflected(), -x) == doctest::Approx(-velocity_field(pot, mu, x)).epsilon(1e-12));
        const auto rep = energy_report(pot, mu);
        CHECK(rep.energy == e);
        CHECK(rep.steady_residual >= 0);
        CHECK(rep.steady_residual == steady_residual(pot, mu));
    }
}

TEST_CASE("position gradient matches central differences") {
    std::mt19937_64 rng(32);
    const double ps[] = {2.5, 3.0, 4.0, 7.0};
    const double qs[] = {2.0, 2.2};
    for (int t = 0; t < 100; ++t) {
        const Potential pot(ps[t % 4], qs[t % 2]);
        const auto mu = random_measure(rng, 5);
        const auto x = mu.positions();
        const auto m = mu.masses();
        const auto grad = position_gradient(pot, mu);
        double scale = 0;
        for (double g : grad) scale = std::max(scale, std::abs(g));
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double h = 1e-6;
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            const double fd = (interaction_energy(pot, xp, m) - interaction_energy(pot, xm, m)) / (2 * h);
            CHECK(std::abs(fd - grad[i]) <= 1e-6 * std::max(scale, 1e-3));
        }
    }
}

TEST_CASE("mass gradient matches central differences") {
    std::mt19937_64 rng(33);
    const Potential pot(4, 2);
    for (int t = 0; t < 20; ++t) {
        const auto mu = random_measure(rng, 4);
        const auto x = mu.positions();
        const auto m = mu.masses();
        const auto g = mass_gradient(pot, x, m);
        for (std::size_t i = 0; i < m.size(); ++i) {
            const double h = 1e-6;
            auto mp = m, mm = m;
            mp[i] += h;
            mm[i] -= h;
            const double fd = (interaction_energy(pot, x, mp) - interaction_energy(pot, x, mm)) / (2 * h);
            CHECK(fd == doctest::Approx(g[i]).epsilon(1e-6));
        }
    }
}
