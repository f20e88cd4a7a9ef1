#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>

namespace mildrep {

/// Neumaier's variant of Kahan summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            comp_ += (sum_ - t) + v;
        } else {
            comp_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    CompensatedSum& operator+=(double v) noexcept {
        add(v);
        return *this;
    }
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline double compensated_total(std::span<const double> values) noexcept {
    CompensatedSum s;
    for (double v : values) s += v;
    return s.value();
}

/// |x|^e with the convention 0^e = 0 for e > 0.
inline double abs_pow(double x, double e) noexcept {
    const double a = std::abs(x);
    if (a == 0.0) return 0.0;
    if (e == 1.0) return a;
    if (e == 2.0) return a * a;
    return std::pow(a, e);
}

/// Bisection on [lo, hi] where f(lo) and f(hi) have opposite signs.
/// Runs exactly `iterations` halvings; throws NumericalError when the
/// bracket does not straddle a sign change.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              int iterations = 60);

}  // namespace mildrep
