#pragma once

#include <optional>

namespace mildrep {

/// Structural radii of the power-law potential.
struct Radii {
    double inflection;  ///< r: V''(r) = 0
    double zero;        ///< R: V(R) = 0
    double gap;         ///< l = R - r
};

/**
 * Repulsive-attractive power-law potential
 *
 *     V(x) = |x|^p / p - |x|^q / q,    p > q >= 2,
 *
 * attractive at long range (exponent p) and mildly repulsive at short range
 * (exponent q). The radii r, R, l are computed once at construction and
 * self-checked against their defining equations.
 */
class Potential {
public:
    /// Throws DomainError unless p > q >= 2 and both are finite.
    Potential(double p, double q);

    /// Accepts any 0 < q < p. Only the threshold functions need this; the
    /// radii are left NaN when they do not exist (q <= 1).
    static Potential relaxed(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    bool is_relaxed() const noexcept { return relaxed_; }

    double inflection_radius() const noexcept { return r_; }
    double zero_radius() const noexcept { return R_; }
    double gap() const noexcept { return R_ - r_; }
    Radii radii() const noexcept { return {r_, R_, R_ - r_}; }

    /// Derivative of the given order (0..3) at x. Limits are used at x = 0:
    /// V(0) = V'(0) = 0, V''(0) = -1 when q = 2 and 0 when q > 2. The third
    /// derivative at 0 is Undefined unless p, q >= 3.
    double eval(double x, int order = 0) const;

    double value(double x) const noexcept;
    double first(double x) const noexcept;
    double second(double x) const;

    /// V(1) = 1/p - 1/q, the minimum of V.
    double well_depth() const noexcept { return 1.0 / p_ - 1.0 / q_; }

private:
    Potential(double p, double q, bool relaxed);
    double pow_p(double a) const noexcept;  // a^(p-1) style helpers on a >= 0
    double pow_q(double a) const noexcept;

    double p_;
    double q_;
    bool relaxed_;
    bool p_integral_;
    bool q_integral_;
    double r_;
    double R_;
};

/// Root c in (0, 1) of x^(q+k) - x^(q-1) = k (x - 1), found by bisection on
/// [1e-9, 1 - 1e-9]. For p >= q + k + 1, (x-1) V'(x) >= k (x-1)^2 on [c, inf).
double lemma_c(const Potential& pot, double k);

/// V(1) / (V(1 - 3l) + l^q / q) when the denominator is negative; this
/// bounds the mass ratio of the two clusters of any local minimizer.
std::optional<double> mass_ratio_bound(const Potential& pot);

}  // namespace mildrep
