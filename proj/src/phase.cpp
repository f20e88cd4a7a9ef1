#include "mildrep/phase.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/numeric.hpp"
#include "mildrep/potential.hpp"
#include "mildrep/transport.hpp"

namespace mildrep {

double f_of_p(double p, double q) {
    if (!(p > 0) || !(q > 0)) throw DomainError("f_of_p requires p, q > 0");
    // Grouped so that p == q cancels exactly.
    return (1 / (2 * p) - 1 / (2 * q)) + (1 / (q * std::exp2(q)) - 1 / (p * std::exp2(p)));
}

double g_of_q(double q) {
    if (!(q > 0)) throw DomainError("g_of_q requires q > 0");
    return q * std::numbers::ln2 + 1 - std::exp2(q - 1);
}

double q_star() {
    const double root = bisect(g_of_q, 2.0, 3.0, 200);
    if (std::abs(g_of_q(root)) > 1e-12) throw NumericalError("q_star: residual above 1e-12");
    return root;
}

std::optional<double> p_lower(double q) {
    if (!(q > 0) || q > 3) throw DomainError("p_lower is defined for 0 < q <= 3");
    if (q >= q_star()) return std::nullopt;
    const auto f = [q](double p) { return f_of_p(p, q); };
    double prev = q;
    double offset = 1e-9;
    double p = q + offset;
    if (!(f(p) > 0)) throw NumericalError("p_lower: f is not positive just above q");
    while (true) {
        prev = p;
        offset *= 1.05;
        p = q + offset;
        if (p > 200) throw NumericalError("p_lower: no root of f below p = 200");
        if (f(p) <= 0) break;
    }
    const double root = bisect(f, prev, p, 200);
    if (std::abs(f(root)) > 1e-12) throw NumericalError("p_lower: residual above 1e-12");
    for (int k = 1; k < 1000; ++k) {
        const double x = q + (root - q) * k / 1000.0;
        if (!(f(x) > 0)) {
            throw NumericalError("p_lower: f changes sign before the reported root");
        }
    }
    return root;
}

DiscreteMeasure three_atom_measure(double m) {
    if (!(m >= 0 && m < 1)) throw DomainError("three-atom weight must lie in [0, 1)");
    const Atom atoms[] = {{0.0, (1 - m) / 2}, {0.5, m}, {1.0, (1 - m) / 2}};
    return DiscreteMeasure::from_atoms(atoms);
}

double three_atom_energy(double p, double q, double m) {
    if (!(m >= 0 && m < 1)) throw DomainError("three-atom weight must lie in [0, 1)");
    const auto pot = Potential::relaxed(p, q);
    return m * (1 - m) * pot.value(0.5) + (1 - m) * (1 - m) / 4 * pot.value(1.0);
}

double three_atom_energy_slope(double p, double q, double m) {
    const auto pot = Potential::relaxed(p, q);
    return (1 - 2 * m) * pot.value(0.5) - (1 - m) / 2 * pot.value(1.0);
}

PhaseScan p_star_scan(double q, const std::vector<double>& p_grid, std::size_t n_atoms,
                      std::size_t n_starts, std::uint64_t seed, SearchOptions opts) {
    if (p_grid.empty()) throw DomainError("p grid is empty");
    for (std::size_t i = 1; i < p_grid.size(); ++i) {
        if (!(p_grid[i] > p_grid[i - 1])) throw DomainError("p grid must be strictly ascending");
    }
    PhaseScan scan;
    const auto star = DiscreteMeasure::two_dirac(0.5);
    for (std::size_t i = 0; i < p_grid.size(); ++i) {
        const Potential pot(p_grid[i], q);
        const auto found = global_search(pot, n_atoms, n_starts, seed + i, opts);
        const double star_energy = pot.well_depth() / 4;
        PhasePoint pt{.p = p_grid[i], .q = q, .global_best_energy = found.energy,
                      .two_dirac_energy = star_energy, .is_two_dirac_optimal = false,
                      .atoms_of_best = found.minimizer};
        if (found.energy > star_energy) {
            pt.global_best_energy = star_energy;
            pt.atoms_of_best = star;
        }
        pt.is_two_dirac_optimal = std::abs(pt.global_best_energy - star_energy) <= 1e-6 &&
                                  d_inf(canonicalize(pt.atoms_of_best), star) <= 1e-3;
        scan.points.push_back(std::move(pt));
    }
    for (std::size_t i = scan.points.size(); i-- > 0;) {
        if (!scan.points[i].is_two_dirac_optimal) break;
        scan.threshold = scan.points[i].p;
        scan.threshold_lower = i > 0 ? std::optional<double>(scan.points[i - 1].p) : std::nullopt;
    }
    return scan;
}

}  // namespace mildrep
