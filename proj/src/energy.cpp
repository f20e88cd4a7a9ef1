#include "mildrep/energy.hpp"

#include <algorithm>
#include <cmath>

#include "mildrep/numeric.hpp"

namespace mildrep {

double interaction_energy(const Potential& pot, std::span<const double> x,
                          std::span<const double> m) {
    CompensatedSum sum;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            sum += m[i] * m[j] * pot.value(x[i] - x[j]);
        }
    }
    return sum.value();
}

double interaction_energy(const Potential& pot, const DiscreteMeasure& mu) {
    const auto x = mu.positions();
    const auto m = mu.masses();
    return interaction_energy(pot, x, m);
}

double velocity_field(const Potential& pot, const DiscreteMeasure& mu, double x) {
    CompensatedSum sum;
    for (const Atom& a : mu.atoms()) sum += a.mass * pot.first(x - a.position);
    return -sum.value();
}

std::vector<double> atom_forces(const Potential& pot, std::span<const double> x,
                                std::span<const double> m) {
    const std::size_t n = x.size();
    std::vector<CompensatedSum> acc(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            // V' is odd: the (j, i) term is the negative of the (i, j) one.
            const double d = pot.first(x[i] - x[j]);
            acc[i] += m[j] * d;
            acc[j] += -m[i] * d;
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].value();
    return out;
}

double steady_residual(const Potential& pot, const DiscreteMeasure& mu) {
    const auto x = mu.positions();
    const auto m = mu.masses();
    double r = 0.0;
    for (double f : atom_forces(pot, x, m)) r = std::max(r, std::abs(f));
    return r;
}

std::vector<double> position_gradient(const Potential& pot, const DiscreteMeasure& mu) {
    const auto x = mu.positions();
    const auto m = mu.masses();
    auto g = atom_forces(pot, x, m);
    for (std::size_t i = 0; i < g.size(); ++i) g[i] *= m[i];
    return g;
}

std::vector<double> mass_gradient(const Potential& pot, std::span<const double> x,
                                  std::span<const double> m) {
    const std::size_t n = x.size();
    std::vector<CompensatedSum> acc(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = pot.value(x[i] - x[j]);
            acc[i] += m[j] * v;
            acc[j] += m[i] * v;
        }
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = acc[i].value();
    return out;
}

EnergyReport energy_report(const Potential& pot, const DiscreteMeasure& mu) {
    const auto x = mu.positions();
    const auto m = mu.masses();
    EnergyReport rep;
    rep.energy = interaction_energy(pot, x, m);
    const auto f = atom_forces(pot, x, m);
    rep.position_gradient.resize(f.size());
    rep.steady_residual = 0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        rep.position_gradient[i] = m[i] * f[i];
        rep.steady_residual = std::max(rep.steady_residual, std::abs(f[i]));
    }
    return rep;
}

}  // namespace mildrep
