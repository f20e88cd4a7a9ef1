#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "mildrep/measure.hpp"
#include "mildrep/potential.hpp"

namespace mildrep {

struct SearchOptions {
    double tol = 1e-10;             ///< on max |V' * mu| at the atoms (and mass KKT gap)
    std::size_t max_iters = 200000;
    bool optimize_masses = false;
    double merge_tol = 1e-9;
    unsigned threads = 0;           ///< global_search workers; 0 = default
    bool record_trace = false;      ///< keep the energy after every accepted step
};

struct SearchResult {
    DiscreteMeasure minimizer;      ///< canonicalized
    double energy = 0;
    std::size_t starts = 1;
    std::size_t best_start_index = 0;
    double residual = 0;            ///< steady residual of the minimizer
    double mass_residual = 0;       ///< max - min of dE/dm_i (0 when masses are fixed)
    bool converged = false;
    std::size_t iterations = 0;
    std::vector<double> energy_trace = {};
};

/**
 * Descent on the interaction energy from `start`.
 *
 * Positions move along the particle velocity -(V' * mu)(x_i) with an Armijo
 * backtracking line search (c = 1e-4, halving, at most 40 halvings). With
 * optimize_masses, each iteration also takes a projected-gradient step on
 * the mass simplex (Euclidean projection), drops atoms whose mass falls
 * below 1e-10, and tries an exact Newton step on the current face once the
 * masses are nearly stationary. Atoms within merge_tol are merged every
 * iteration. Returns the best point reached; `converged` is false when
 * max_iters ran out or no step could decrease the energy first.
 */
SearchResult local_minimize(const Potential& pot, const DiscreteMeasure& start,
                            const SearchOptions& opts = {});

/// n_starts runs of local_minimize (masses optimized) from equal-mass atoms
/// drawn uniformly on [0, R]. Start k uses its own RNG stream seeded from
/// (seed, k); the lowest energy wins, ties going to the lowest index.
SearchResult global_search(const Potential& pot, std::size_t n_atoms, std::size_t n_starts,
                           std::uint64_t seed, SearchOptions opts = {});

struct ProbeResult {
    bool found_descent = false;
    std::optional<DiscreteMeasure> witness;
    double delta = 0;  ///< min E(sample) - E(mu) over all samples
    std::size_t evaluated = 0;
};

/**
 * Looks for lower-energy measures inside the d_inf ball of radius epsilon.
 *
 * Every candidate is built by splitting each atom into at most three
 * fragments displaced by at most epsilon, so its d_inf distance to mu is
 * at most epsilon. Besides n_samples random candidates, the structured
 * families from the two-Dirac analysis are always tried for every atom:
 * the symmetric two-way split at +-x and the one-sided mass leak of
 * eta^2 to distance eta, on a grid of x, eta in (0, epsilon].
 */
ProbeResult perturb_probe(const Potential& pot, const DiscreteMeasure& mu, double epsilon,
                          std::size_t n_samples, std::uint64_t seed);

}  // namespace mildrep
