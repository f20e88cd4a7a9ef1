#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mildrep {

/**
 * Discrete distribution of X on [-c, c] with vanishing odd moments
 * E[X^(2j-1)] = 0 for j = 1..n. Positions may repeat; weights are
 * nonnegative and sum to 1.
 */
struct MomentDistribution {
    std::vector<double> positions;
    std::vector<double> weights;
    int n = 1;
    double c = 0;
};

/// Throws DomainError unless weights >= 0 sum to 1 (1e-12), |x| <= c and the
/// odd moments of order 1..2n-1 vanish to `tol`.
void validate(const MomentDistribution& dist, double tol = 1e-10);

/// E[X^k] by compensated summation.
double moment(const MomentDistribution& dist, int k);

/// Support bound ((2n-1) / (3M))^(1/(2n-1)).
double support_bound(int n, double M);

/// E|X - Y|^(2n+1) - 2 E[X^(2n+1)] - M (E[X^(2n)])^2 for X, Y i.i.d.,
/// with the first term as an exact double sum over atom pairs. Validates
/// the distribution for this n first.
double lhs_value(const MomentDistribution& dist, int n, double M);

/// Weights sampled by hit-and-run from the polytope of constraint-satisfying
/// weights on the symmetric grid of grid_size points spanning [-c, c],
/// starting from uniform weights. Chain length is 50 * grid_size.
/// Requires 1 <= n <= 4 and grid_size >= 2n + 2.
MomentDistribution sample_constrained(int n, double c, int grid_size, std::uint64_t seed);

struct BatchReport {
    double c = 0;
    double min_lhs = 0;
    std::size_t violations = 0;  ///< samples with lhs < -1e-10
    std::size_t trials = 0;
    MomentDistribution worst;
};

/// `trials` samples at the exact support bound, each with its own RNG
/// stream derived from (seed, trial index).
BatchReport verify_batch(int n, double M, std::size_t trials, std::uint64_t seed,
                         int grid_size = 12, unsigned threads = 0);

/// Modifications of the inequality that are known to fail.
struct SharpnessVariant {
    enum class Kind { ReplaceC, ReplaceFourthMoment };
    Kind kind;
    double C = 2.0;  ///< coefficient of E[X^(2n+1)] for ReplaceC

    static SharpnessVariant replace_c(double C) { return {Kind::ReplaceC, C}; }
    static SharpnessVariant replace_fourth_moment() { return {Kind::ReplaceFourthMoment, 2.0}; }
};

/// Left side of the modified inequality:
///   ReplaceC:             E|X-Y|^3 - C E[X^3] - M (E[X^2])^2
///   ReplaceFourthMoment:  E|X-Y|^3 - 2 E[X^3] - M E[X^4]
/// (general n: exponents 2n+1, 2n, 4n).
double modified_lhs(const MomentDistribution& dist, int n, double M, SharpnessVariant variant);

struct Counterexample {
    MomentDistribution distribution;
    double value;  ///< modified_lhs, < -1e-12
    double t;      ///< probability of the positive atom
};

/// Grid search over centered two-point laws X = c w.p. t, -t c/(1-t)
/// w.p. 1-t, t in (0, 1/2), at c = 1/(3M). Only n = 1 is supported;
/// ReplaceC requires C > 2. Throws NumericalError when nothing negative
/// is found.
Counterexample sharpness_counterexample(SharpnessVariant variant, int n, double M);

}  // namespace mildrep
