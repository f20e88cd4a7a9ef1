#include "mildrep/parallel.hpp"
#include "mildrep/numeric.hpp"
#include "mildrep/errors.hpp"

#include <cstdlib>
#include <string>

namespace mildrep {

unsigned default_thread_count() {
    if (const char* env = std::getenv("MILDREP_THREADS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<unsigned>(v);
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              int iterations) {
    double flo = f(lo);
    const double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) {
        throw NumericalError("bisect: bracket [" + std::to_string(lo) + ", " +
                             std::to_string(hi) + "] has no sign change");
    }
    for (int i = 0; i < iterations; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace mildrep
