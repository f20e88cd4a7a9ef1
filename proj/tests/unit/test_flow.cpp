#include <cmath>
#include <random>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/flow.hpp"
#include "mildrep/io.hpp"

using namespace mildrep;

namespace {

DiscreteMeasure random_measure(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> pos(0, 1.5), mass(0.05, 1);
    std::vector<Atom> a(n);
    for (auto& x : a) x = {pos(rng), mass(rng)};
    return DiscreteMeasure::from_atoms(a);
}

}  // namespace

TEST_CASE("a steady two-Dirac state does not move") {
    const Potential pot(4, 2);
    const auto rho = DiscreteMeasure::two_dirac(0.3);
    const auto next = step(pot, rho, 1e-3);
    CHECK(atomwise_distance(next, rho) <= 1e-14);
}

TEST_CASE("two atoms at distance 1/2 separate toward 1") {
    const Potential pot(3, 2);
    const Atom pair[] = {{0, 0.5}, {0.5, 0.5}};
    const auto mu = DiscreteMeasure::from_atoms(pair);
    const double dt = 1e-4;
    const auto next = step(pot, mu, dt);
    const double gap_rate = (next.diameter() - 0.5) / dt;
    CHECK(gap_rate == doctest::Approx(0.25).epsilon(1e-3));

    FlowOptions opts;
    opts.dt = 1e-2;
    opts.max_time = 200;
    opts.residual_tol = 1e-10;
    const auto traj = simulate(pot, mu, opts);
    CHECK(traj.reason == Termination::ResidualBelowTol);
    CHECK(traj.final_measure().diameter() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(traj.final_residual <= 1e-10);
    CHECK(steady_residual(pot, traj.final_measure()) <= 1e-10);
}

TEST_CASE("single steps never raise the energy") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> dtd(1e-5, 1e-3);
    const double ps[] = {2.5, 3, 4, 8};
    for (int t = 0; t < 1000; ++t) {
        const Potential pot(ps[t % 4], 2.0 + 0.1 * (t % 3));
        const auto mu = random_measure(rng, 2 + t % 6);
        const auto next = step(pot, mu, dtd(rng));
        CHECK(interaction_energy(pot, next) <= interaction_energy(pot, mu) + 1e-9);
        CHECK(std::abs(next.total_mass() - 1) <= 1e-12);
        CHECK(std::abs(next.mean() - mu.mean()) <= 1e-12);
    }
}

TEST_CASE("trajectory invariants") {
    std::mt19937_64 rng(42);
    const Potential pot(5, 2);
    FlowOptions opts;
    opts.dt = 1e-3;
    opts.max_time = 2;
    opts.snapshot_every = 50;
    const auto mu0 = random_measure(rng, 8);
    const auto traj = simulate(pot, mu0, opts);
    REQUIRE(traj.snapshots.size() >= 2);
    CHECK(traj.snapshots.front().time == 0.0);
    CHECK(traj.snapshots.front().measure == mu0);
    CHECK(traj.max_energy_increase <= 1e-9);
    for (std::size_t i = 1; i < traj.snapshots.size(); ++i) {
        const auto& s = traj.snapshots[i];
        CHECK(s.time > traj.snapshots[i - 1].time);
        CHECK(s.energy <= traj.snapshots[i - 1].energy + 1e-9);
        CHECK(std::abs(s.measure.total_mass() - 1) <= 1e-12);
        CHECK(std::abs(s.measure.mean() - mu0.mean()) <= 1e-9 * s.time + 1e-12);
    }
}

TEST_CASE("a single atom is already steady") {
    const auto traj = simulate(Potential(4, 2), DiscreteMeasure::dirac(0.3), FlowOptions{});
    CHECK(traj.reason == Termination::ResidualBelowTol);
    CHECK(traj.steps == 0);
    CHECK(traj.snapshots.size() == 1);
}

TEST_CASE("invalid options and blow-up are reported") {
    const Potential pot(4, 2);
    const auto rho = DiscreteMeasure::two_dirac(0.5);
    CHECK_THROWS_AS(step(pot, rho, 0.0), DomainError);
    CHECK_THROWS_AS(step(pot, rho, -1.0), DomainError);
    FlowOptions bad;
    bad.max_time = 0;
    CHECK_THROWS_AS(simulate(pot, rho, bad), DomainError);
    bad = {};
    bad.residual_tol = 0;
    CHECK_THROWS_AS(simulate(pot, rho, bad), DomainError);

    const Potential steep(12, 2);
    const Atom far[] = {{0, 0.5}, {40, 0.5}};
    CHECK_THROWS_AS(step(steep, DiscreteMeasure::from_atoms(far), 10.0), NumericalError);
}

TEST_CASE("default time step shrinks with curvature at the zero radius") {
    CHECK(default_time_step(Potential(3, 2)) == doctest::Approx(1e-3 / Potential(3, 2).second(Potential(3, 2).zero_radius())));
    CHECK(default_time_step(Potential(20, 2)) < default_time_step(Potential(4, 2)));
    CHECK(default_time_step(Potential(20, 2)) <= 1e-3);
}

TEST_CASE("CSV and JSON-lines export") {
    const Potential pot(3, 2);
    const Atom pair[] = {{0, 0.5}, {0.5, 0.5}};
    FlowOptions opts;
    opts.dt = 1e-2;
    opts.max_time = 0.1;
    const auto traj = simulate(pot, DiscreteMeasure::from_atoms(pair), opts);

    std::ostringstream csv;
    write_trajectory_csv(csv, traj);
    std::istringstream lines(csv.str());
    std::string line;
    std::getline(lines, line);
    CHECK(line == "time,energy,atom_count");
    std::size_t rows = 0;
    while (std::getline(lines, line)) ++rows;
    CHECK(rows == traj.snapshots.size());

    std::ostringstream jsonl;
    write_snapshots_jsonl(jsonl, traj);
    std::istringstream jl(jsonl.str());
    std::size_t i = 0;
    while (std::getline(jl, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.at("time").get<double>() == traj.snapshots[i].time);
        CHECK(measure_from_json(j) == traj.snapshots[i].measure);
        ++i;
    }
    CHECK(i == traj.snapshots.size());
    CHECK(to_string(Termination::MaxTime) == "MaxTime");
}
