#include "mildrep/transport.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mildrep/errors.hpp"
#include "mildrep/numeric.hpp"

namespace mildrep {
namespace {

constexpr double kBreakpointTol = 1e-14;

std::vector<double> cumulative(const DiscreteMeasure& mu) {
    std::vector<double> cdf(mu.size());
    CompensatedSum s;
    for (std::size_t i = 0; i < mu.size(); ++i) {
        s += mu[i].mass;
        cdf[i] = s.value();
    }
    cdf.back() = 1.0;
    return cdf;
}

void check_lambda(double lambda) {
    if (!(lambda >= 1) || !std::isfinite(lambda)) {
        throw DomainError("transport exponent lambda must satisfy 1 <= lambda < inf");
    }
}

}  // namespace

Coupling monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    const auto fa = cumulative(mu);
    const auto fb = cumulative(nu);
    Coupling plan;
    plan.entries.reserve(mu.size() + nu.size());
    std::size_t i = 0;
    std::size_t j = 0;
    double prev = 0.0;
    while (i < fa.size() && j < fb.size()) {
        const bool same = std::abs(fa[i] - fb[j]) <= kBreakpointTol;
        const double next = same ? std::max(fa[i], fb[j]) : std::min(fa[i], fb[j]);
        const double mass = next - prev;
        if (mass > 0) plan.entries.push_back({mu[i].position, nu[j].position, mass});
        prev = std::max(prev, next);
        if (same) {
            ++i;
            ++j;
        } else if (fa[i] < fb[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    return plan;
}

double coupling_cost(const Coupling& plan, double lambda) {
    CompensatedSum cost;
    for (const auto& e : plan.entries) cost += e.mass * abs_pow(e.source - e.target, lambda);
    return cost.value();
}

double d_lambda(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
    check_lambda(lambda);
    const double cost = coupling_cost(monotone_coupling(mu, nu), lambda);
    return lambda == 1.0 ? cost : std::pow(cost, 1.0 / lambda);
}

double d_inf(const DiscreteMeasure& mu, const DiscreteMeasure& nu) {
    double d = 0.0;
    for (const auto& e : monotone_coupling(mu, nu).entries) {
        d = std::max(d, std::abs(e.source - e.target));
    }
    return d;
}

double lp_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda) {
    check_lambda(lambda);
    const std::size_t n = mu.size();
    const std::size_t m = nu.size();
    if (n + m > 12) {
        throw DomainError("lp_oracle: combined support " + std::to_string(n + m) +
                          " exceeds the limit of 12 atoms");
    }
    // Variables x_ij (row-major). Row sums = mu masses, column sums = nu
    // masses; the last column constraint is implied by the others.
    const std::size_t vars = n * m;
    std::vector<std::vector<double>> A;
    std::vector<double> b;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> row(vars, 0.0);
        for (std::size_t j = 0; j < m; ++j) row[i * m + j] = 1.0;
        A.push_back(std::move(row));
        b.push_back(mu[i].mass);
    }
    for (std::size_t j = 0; j + 1 < m; ++j) {
        std::vector<double> row(vars, 0.0);
        for (std::size_t i = 0; i < n; ++i) row[i * m + j] = 1.0;
        A.push_back(std::move(row));
        b.push_back(nu[j].mass);
    }
    std::vector<double> c(vars);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            c[i * m + j] = abs_pow(mu[i].position - nu[j].position, lambda);
        }
    }
    return detail::simplex_minimize(A, b, c);
}

}  // namespace mildrep
