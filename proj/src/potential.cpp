#include "mildrep/potential.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "mildrep/errors.hpp"
#include "mildrep/numeric.hpp"

namespace mildrep {
namespace {

bool is_small_integer(double e) { return e == std::floor(e) && e >= 0 && e <= 64; }

double int_pow(double a, int n) {
    double result = 1.0;
    double base = a;
    while (n > 0) {
        if (n & 1) result *= base;
        base *= base;
        n >>= 1;
    }
    return result;
}

// a^e for a >= 0, with 0^0 = 1 (needed for V''(0) when q = 2).
double nonneg_pow(double a, double e, bool integral) {
    if (integral) return int_pow(a, static_cast<int>(e));
    if (e == 1.0) return a;
    if (e == 0.0) return 1.0;
    if (a == 0.0) return e == 0.0 ? 1.0 : (e > 0 ? 0.0 : std::numeric_limits<double>::infinity());
    return std::pow(a, e);
}

double sign(double x) { return (x > 0) - (x < 0); }

}  // namespace

Potential::Potential(double p, double q) : Potential(p, q, false) {}

Potential Potential::relaxed(double p, double q) { return Potential(p, q, true); }

Potential::Potential(double p, double q, bool relaxed)
    : p_(p), q_(q), relaxed_(relaxed) {
    if (!std::isfinite(p) || !std::isfinite(q)) {
        throw DomainError("potential exponents must be finite");
    }
    if (!(p > q)) throw DomainError("potential requires p > q");
    if (relaxed) {
        if (!(q > 0)) throw DomainError("relaxed potential requires q > 0");
    } else if (!(q >= 2)) {
        throw DomainError("potential requires q >= 2 (mildly repulsive regime)");
    }
    // Integer fast path covers the exponents p, q and p-1..p-3, q-1..q-3.
    p_integral_ = is_small_integer(p) && p >= 3;
    q_integral_ = is_small_integer(q) && q >= 3;

    R_ = std::pow(p / q, 1.0 / (p - q));
    r_ = q > 1 ? std::pow((q - 1) / (p - 1), 1.0 / (p - q))
               : std::numeric_limits<double>::quiet_NaN();

    const double v_zero = value(R_);
    const double v_scale = std::max(1.0, std::pow(R_, p) / p);
    if (std::abs(v_zero) > 1e-12 * v_scale) {
        throw NumericalError("potential self-check failed: V(R) = " + std::to_string(v_zero));
    }
    if (q > 1) {
        const double curv = second(r_);
        const double c_scale = std::max(1.0, (p - 1) * std::pow(r_, p - 2));
        if (std::abs(curv) > 1e-12 * c_scale) {
            throw NumericalError("potential self-check failed: V''(r) = " + std::to_string(curv));
        }
    }
}

double Potential::pow_p(double a) const noexcept { return nonneg_pow(a, p_, p_integral_); }
double Potential::pow_q(double a) const noexcept { return nonneg_pow(a, q_, q_integral_); }

double Potential::value(double x) const noexcept {
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    return pow_p(a) / p_ - pow_q(a) / q_;
}

double Potential::first(double x) const noexcept {
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    return sign(x) * (nonneg_pow(a, p_ - 1, p_integral_) - nonneg_pow(a, q_ - 1, q_integral_));
}

double Potential::second(double x) const {
    const double a = std::abs(x);
    if (a == 0.0 && q_ < 2) throw UndefinedValue("V''(0) diverges for q < 2");
    // (p-1) a^(p-2) - (q-1) a^(q-2); 0^0 = 1 gives V''(0) = -(q-1) at q = 2.
    return (p_ - 1) * nonneg_pow(a, p_ - 2, p_integral_) -
           (q_ - 1) * nonneg_pow(a, q_ - 2, q_integral_);
}

double Potential::eval(double x, int order) const {
    if (!std::isfinite(x)) throw DomainError("potential evaluated at a non-finite point");
    switch (order) {
        case 0: return value(x);
        case 1: return first(x);
        case 2: return second(x);
        case 3: {
            const double a = std::abs(x);
            if (a == 0.0) {
                if (p_ < 3 || q_ < 3) {
                    throw UndefinedValue("V'''(0) is undefined unless p, q >= 3");
                }
                return 0.0;
            }
            return sign(x) * ((p_ - 1) * (p_ - 2) * nonneg_pow(a, p_ - 3, p_integral_) -
                              (q_ - 1) * (q_ - 2) * nonneg_pow(a, q_ - 3, q_integral_));
        }
        default:
            throw DomainError("derivative order must be in 0..3, got " + std::to_string(order));
    }
}

double lemma_c(const Potential& pot, double k) {
    if (!(k > 0) || !std::isfinite(k)) throw DomainError("lemma_c requires k > 0");
    const double q = pot.q();
    const auto h = [q, k](double x) {
        return std::pow(x, q + k) - std::pow(x, q - 1) - k * (x - 1);
    };
    const double lo = 1e-9;
    const double hi = 1 - 1e-9;
    const double hlo = h(lo);
    const double hhi = h(hi);
    if (!((hlo > 0 && hhi < 0) || (hlo < 0 && hhi > 0))) {
        throw NumericalError("lemma_c: no sign change on [1e-9, 1-1e-9] for q=" +
                             std::to_string(q) + ", k=" + std::to_string(k));
    }
    const double c = bisect(h, lo, hi, 60);
    if (std::abs(h(c)) > 1e-12) {
        throw NumericalError("lemma_c: bisection residual " + std::to_string(h(c)));
    }
    return c;
}

std::optional<double> mass_ratio_bound(const Potential& pot) {
    const double l = pot.gap();
    const double denom = pot.value(1 - 3 * l) + std::pow(l, pot.q()) / pot.q();
    if (!(denom < 0)) return std::nullopt;
    return pot.well_depth() / denom;
}

}  // namespace mildrep
