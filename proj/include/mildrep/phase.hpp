#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mildrep/measure.hpp"
#include "mildrep/search.hpp"

namespace mildrep {

/// f(p) = V(1)/2 - V(1/2) = 1/(2p) - 1/(2q) - 1/(p 2^p) + 1/(q 2^q),
/// the negated slope at m = 0 of the three-atom competitor energy.
/// Vanishes identically at p = q.
double f_of_p(double p, double q);

/// g(q) = q log 2 + 1 - 2^(q-1); f'(q) = g(q) / (q^2 2^q).
double g_of_q(double q);

/// Unique root of g in [2, 3], by bisection (|g| <= 1e-12).
double q_star();

/// For 0 < q < q*: the first root p_* > q of f(., q). Returns nullopt for
/// q >= q*. Throws NumericalError if no root exists below p = 200.
std::optional<double> p_lower(double q);

/// ((1-m)/2) δ_0 + m δ_{1/2} + ((1-m)/2) δ_1
DiscreteMeasure three_atom_measure(double m);

/// m(1-m) V(1/2) + (1-m)^2/4 V(1)
double three_atom_energy(double p, double q, double m);

/// d/dm of three_atom_energy; equals -f_of_p(p, q) at m = 0.
double three_atom_energy_slope(double p, double q, double m);

struct PhasePoint {
    double p;
    double q;
    double global_best_energy;
    double two_dirac_energy;  ///< V(1)/4
    bool is_two_dirac_optimal;
    DiscreteMeasure atoms_of_best;
};

struct PhaseScan {
    std::vector<PhasePoint> points;
    /// First grid p from which the two-Dirac state stays optimal to the end
    /// of the grid, and the grid point before it (the bracket).
    std::optional<double> threshold;
    std::optional<double> threshold_lower;
};

/// global_search at every p of an ascending grid. rho* itself is always a
/// candidate, so global_best_energy <= V(1)/4.
PhaseScan p_star_scan(double q, const std::vector<double>& p_grid, std::size_t n_atoms,
                      std::size_t n_starts, std::uint64_t seed, SearchOptions opts = {});

}  // namespace mildrep
