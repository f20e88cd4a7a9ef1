#pragma once

#include <span>
#include <vector>

#include "mildrep/measure.hpp"
#include "mildrep/potential.hpp"

namespace mildrep {

/// E(mu) = 1/2 sum_i sum_j m_i m_j V(x_i - x_j). The diagonal vanishes
/// since V(0) = 0; the off-diagonal pairs are summed once and doubled,
/// with compensated summation.
double interaction_energy(const Potential& pot, const DiscreteMeasure& mu);
double interaction_energy(const Potential& pot, std::span<const double> positions,
                          std::span<const double> masses);

/// v(x) = -(V' * mu)(x) = -sum_j m_j V'(x - x_j).
double velocity_field(const Potential& pot, const DiscreteMeasure& mu, double x);

/// (V' * mu)(x_i) at every atom.
std::vector<double> atom_forces(const Potential& pot, std::span<const double> positions,
                                std::span<const double> masses);

/// max_i |(V' * mu)(x_i)|; zero exactly at steady states.
double steady_residual(const Potential& pot, const DiscreteMeasure& mu);

/// dE/dx_i = m_i (V' * mu)(x_i) = -m_i v(x_i).
std::vector<double> position_gradient(const Potential& pot, const DiscreteMeasure& mu);

/// dE/dm_i = sum_j m_j V(x_i - x_j).
std::vector<double> mass_gradient(const Potential& pot, std::span<const double> positions,
                                  std::span<const double> masses);

struct EnergyReport {
    double energy;
    std::vector<double> position_gradient;
    double steady_residual;
};

EnergyReport energy_report(const Potential& pot, const DiscreteMeasure& mu);

}  // namespace mildrep
