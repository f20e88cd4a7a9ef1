#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "mildrep/measure.hpp"

namespace mildrep {

enum class Verdict { StrictLocalMin, Saddle };

std::string_view to_string(Verdict v);

/// Which atom of m δ_0 + (1-m) δ_1 the symmetric split family acts on.
/// Right: the mass-m atom at 0 is split into (m/2) δ_{-x} + (m/2) δ_x.
/// Left: the mass-(1-m) atom at 1 is split into halves at 1 -+ x.
enum class SplitSide { Left, Right };

enum class WitnessFamily {
    SplitRight,  ///< (m/2) δ_{-x} + (m/2) δ_x + (1-m) δ_1
    SplitLeft,   ///< m δ_0 + ((1-m)/2) δ_{1-x} + ((1-m)/2) δ_{1+x}
    MassLeak,    ///< heavy atom leaks eta^alpha of mass a distance eta toward the light one
};

std::string_view to_string(WitnessFamily f);

struct Witness {
    WitnessFamily family;
    double parameter;    ///< x for the split families, eta for the leak
    double alpha = 0;    ///< leak exponent (leaked mass = eta^alpha); 0 for splits
    double energy_drop;  ///< E(rho_m*) - E(witness) > 1e-12
    double distance;     ///< d_inf(witness, rho_m*)
    DiscreteMeasure measure;
};

struct Classification {
    Verdict verdict;
    int case_id;          ///< clause 1..6 of the two-Dirac classification
    bool on_boundary;     ///< m (or p, q) within 1e-12 of a clause boundary
    /// min_i (b m0 m1 - a m_i^2) with a = -V''(0)/2, b = V''(1)/2: positive
    /// inside the quadratic-certificate region, <= 0 outside it.
    double margin;
    std::optional<Witness> witness;
};

/**
 * Complete classification of rho_m* = m δ_0 + (1-m) δ_1 in the d_inf
 * topology for p > q >= 2, 0 < m < 1:
 *
 *   1. q > 2                          strict local min for every m
 *   2. q = 2, p > 3, 1/(p-1) < m < (p-2)/(p-1)   strict local min
 *   3. q = 2, p > 3, otherwise (endpoints included)  saddle
 *   4. q = 2, 2 < p < 3               saddle for every m
 *   5. q = 2, p = 3, m != 1/2         saddle
 *   6. q = 2, p = 3, m = 1/2          strict local min
 *
 * Saddle verdicts carry a numeric witness (see saddle_witness).
 */
Classification classify_analytic(double p, double q, double m);

/// Verdict and clause without the witness search.
Classification classify_verdict(double p, double q, double m);

/// E''(0) of the split family at q = 2:
///   Right: -(p-1) m (m - (p-2)/(p-1))
///   Left:  (1-m) (m (p-2) - (1-m))
/// Throws DomainError for q != 2 (no closed form is available there).
double split_second_derivative(double p, double q, double m, SplitSide side);

/// Energy of the split family in closed form,
///   Right: m^2/4 V(2x) + m(1-m)/2 (V(1+x) + V(1-x)),
/// and the mirrored expression for Left.
double split_family_energy(double p, double q, double m, SplitSide side, double x);

DiscreteMeasure split_family_measure(double m, SplitSide side, double x);

/// (m_h - eta^alpha) at the heavy atom, eta^alpha at distance eta from it
/// toward the light atom, the light atom unchanged. The heavy atom is the
/// one at 0 when m >= 1/2.
DiscreteMeasure leak_family_measure(double m, double eta, double alpha);

/// Concrete lower-energy measure within d_inf <= 1e-2 of a saddle rho_m*.
/// Uses the split family with negative E''(0), or the mass-leak family with
/// alpha = 2 at the closed endpoints of clause 3, line-minimized over
/// (0, 1e-2]. Throws DomainError if rho_m* is not a saddle and
/// NumericalError if no drop above 1e-12 is found.
Witness saddle_witness(double p, double q, double m);

/**
 * Quadratic certificate for clauses 1-2: constants a = eps - V''(0)/2,
 * b = V''(1)/2 - eps with a m_i^2 < b m0 m1 for both atoms, and a radius
 * r0 such that V(x) >= -a x^2 on [-2 r0, 2 r0] and
 * V(x) - V(1) >= b (x-1)^2 on [1 - 2 r0, 1 + 2 r0] (checked on 1000
 * points each). eps is half of the largest value keeping both
 * inequalities strict.
 */
struct QuadraticMargin {
    double a;
    double b;
    double epsilon;
    double r0;
    double margin0;  ///< b m0 m1 - a m0^2
    double margin1;  ///< b m0 m1 - a m1^2
};

/// Throws DomainError outside clauses 1-2 and Inconclusive when no radius
/// can be certified.
QuadraticMargin strict_min_margin(double p, double q, double m);

}  // namespace mildrep
