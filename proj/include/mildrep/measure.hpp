#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <vector>

namespace mildrep {

struct Atom {
    double position;
    double mass;

    friend auto operator<=>(const Atom&, const Atom&) = default;
};

/**
 * Finitely supported probability measure on the real line.
 *
 * Atoms are kept sorted by strictly increasing position, every mass is
 * positive and the masses sum to 1 (within 1e-12). Positions closer than
 * kCoalesceTolerance are merged on construction. The empty measure is not
 * representable.
 */
class DiscreteMeasure {
public:
    static constexpr double kCoalesceTolerance = 1e-12;

    /// Sorts, merges near-duplicate positions and renormalizes. Throws
    /// DomainError on empty input, negative or non-finite entries, or zero
    /// total mass. Zero-mass atoms are dropped.
    static DiscreteMeasure from_atoms(std::span<const Atom> atoms);

    static DiscreteMeasure dirac(double x);

    /// m δ_0 + (1 - m) δ_1, for 0 < m < 1.
    static DiscreteMeasure two_dirac(double m);

    std::span<const Atom> atoms() const noexcept { return atoms_; }
    std::size_t size() const noexcept { return atoms_.size(); }
    const Atom& operator[](std::size_t i) const noexcept { return atoms_[i]; }

    std::vector<double> positions() const;
    std::vector<double> masses() const;

    double total_mass() const;
    double mean() const;

    /// max position - min position
    double diameter() const noexcept { return atoms_.back().position - atoms_.front().position; }

    /// Generalized inverse CDF: smallest x with CDF(x) >= u, for 0 < u < 1.
    double quantile(double u) const;

    DiscreteMeasure translated(double shift) const;

    /// Reflection x -> -x.
    DiscreteMeasure reflected() const;

    /// Same masses at new positions (one per atom, any order). Positions
    /// are re-sorted and coincident ones merged, masses are not rescaled.
    DiscreteMeasure with_positions(std::span<const double> positions) const;

    friend bool operator==(const DiscreteMeasure&, const DiscreteMeasure&) = default;

private:
    explicit DiscreteMeasure(std::vector<Atom> atoms) : atoms_(std::move(atoms)) {}
    static DiscreteMeasure build(std::vector<Atom> atoms, bool normalize);

    std::vector<Atom> atoms_;

    friend DiscreteMeasure merge_atoms(const DiscreteMeasure&, double);
};

/// Identifies measures up to rigid motion: translates the leftmost atom to
/// 0, then picks the lexicographically smaller of the result and its mirror
/// image x -> diameter - x. Idempotent.
DiscreteMeasure canonicalize(const DiscreteMeasure& mu);

/// Replaces each chain of atoms with consecutive gaps <= tol by one atom at
/// the chain's mass-weighted mean. Mass is conserved exactly and the first
/// moment to rounding.
DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double tol);

/// Max absolute difference in position or mass between two measures with
/// the same number of atoms; +inf if the atom counts differ.
double atomwise_distance(const DiscreteMeasure& a, const DiscreteMeasure& b);

}  // namespace mildrep
