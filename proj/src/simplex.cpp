#include <cmath>
#include <limits>
#include <vector>

#include "mildrep/errors.hpp"
#include "mildrep/transport.hpp"

namespace mildrep::detail {
namespace {

constexpr double kPivotTol = 1e-12;

struct Tableau {
    // rows x (cols + 1); last column is the right-hand side.
    std::vector<std::vector<double>> t;
    std::vector<std::size_t> basis;
    std::size_t cols;

    void pivot(std::size_t row, std::size_t col) {
        const double pv = t[row][col];
        for (double& v : t[row]) v /= pv;
        for (std::size_t r = 0; r < t.size(); ++r) {
            if (r == row) continue;
            const double f = t[r][col];
            if (f == 0.0) continue;
            for (std::size_t k = 0; k <= cols; ++k) t[r][k] -= f * t[row][k];
        }
        basis[row] = col;
    }

    // Reduced costs for objective c over the current basis.
    std::vector<double> reduced(const std::vector<double>& c) const {
        std::vector<double> d(c);
        d.resize(cols + 1, 0.0);
        for (std::size_t r = 0; r < t.size(); ++r) {
            const double cb = c[basis[r]];
            if (cb == 0.0) continue;
            for (std::size_t k = 0; k <= cols; ++k) d[k] -= cb * t[r][k];
        }
        return d;
    }

    // Runs Bland's rule on objective c restricted to `allowed` columns.
    void optimize(const std::vector<double>& c, std::size_t allowed) {
        for (int iter = 0; iter < 100000; ++iter) {
            const auto d = reduced(c);
            std::size_t enter = allowed;
            for (std::size_t k = 0; k < allowed; ++k) {
                if (d[k] < -kPivotTol) {
                    enter = k;
                    break;
                }
            }
            if (enter == allowed) return;
            std::size_t leave = t.size();
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t r = 0; r < t.size(); ++r) {
                if (t[r][enter] > kPivotTol) {
                    const double ratio = t[r][cols] / t[r][enter];
                    if (ratio < best - 1e-15 ||
                        (std::abs(ratio - best) <= 1e-15 && leave < t.size() &&
                         basis[r] < basis[leave])) {
                        best = ratio;
                        leave = r;
                    }
                }
            }
            if (leave == t.size()) throw NumericalError("simplex: unbounded objective");
            pivot(leave, enter);
        }
        throw NumericalError("simplex: iteration limit reached");
    }
};

}  // namespace

double simplex_minimize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                        const std::vector<double>& c) {
    const std::size_t m = A.size();
    const std::size_t n = c.size();
    Tableau tab;
    tab.cols = n + m;  // structural + artificial
    tab.t.assign(m, std::vector<double>(tab.cols + 1, 0.0));
    tab.basis.resize(m);
    for (std::size_t r = 0; r < m; ++r) {
        if (b[r] < 0) throw NumericalError("simplex: negative right-hand side");
        for (std::size_t k = 0; k < n; ++k) tab.t[r][k] = A[r][k];
        tab.t[r][n + r] = 1.0;
        tab.t[r][tab.cols] = b[r];
        tab.basis[r] = n + r;
    }

    // Phase 1: minimize the sum of artificials.
    std::vector<double> phase1(tab.cols, 0.0);
    for (std::size_t r = 0; r < m; ++r) phase1[n + r] = 1.0;
    tab.optimize(phase1, tab.cols);
    double infeasibility = 0;
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] >= n) infeasibility += tab.t[r][tab.cols];
    }
    if (infeasibility > 1e-9) throw NumericalError("simplex: infeasible program");

    // Drive remaining (zero-level) artificials out of the basis where possible.
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] < n) continue;
        for (std::size_t k = 0; k < n; ++k) {
            if (std::abs(tab.t[r][k]) > kPivotTol) {
                tab.pivot(r, k);
                break;
            }
        }
    }

    // Phase 2 over structural columns only; artificials stuck in the basis
    // sit on redundant rows at level zero.
    std::vector<double> phase2(tab.cols, 0.0);
    for (std::size_t k = 0; k < n; ++k) phase2[k] = c[k];
    tab.optimize(phase2, n);

    double obj = 0;
    for (std::size_t r = 0; r < m; ++r) {
        if (tab.basis[r] < n) obj += c[tab.basis[r]] * tab.t[r][tab.cols];
    }
    return obj;
}

}  // namespace mildrep::detail
