#pragma once

#include <cstddef>
#include <ostream>
#include <string_view>
#include <vector>

#include "mildrep/measure.hpp"
#include "mildrep/potential.hpp"

namespace mildrep {

enum class Termination { ResidualBelowTol, MaxTime, MergeCollapse };

std::string_view to_string(Termination t);

struct FlowOptions {
    double dt = 1e-3;
    double max_time = 10.0;
    double residual_tol = 1e-10;
    std::size_t snapshot_every = 1;  ///< record every k-th step (plus the last)
    double merge_tol = 1e-9;
};

struct Snapshot {
    double time;
    DiscreteMeasure measure;
    double energy;
};

/**
 * Output of the particle gradient flow. Snapshot times strictly increase
 * and the first snapshot is the initial measure. Energies are tracked on
 * every step, not only on recorded ones; `max_energy_increase` is the
 * largest single-step rise seen (<= 0 for an exact gradient flow).
 */
struct FlowTrajectory {
    std::vector<Snapshot> snapshots;
    Termination reason = Termination::MaxTime;
    double final_residual = 0;
    std::size_t steps = 0;
    /// Collisions resolved by merging atoms. Merging is a modeling choice
    /// for coincident particles and is reported rather than hidden.
    std::size_t merge_events = 0;
    double max_energy_increase = 0;

    const DiscreteMeasure& final_measure() const { return snapshots.back().measure; }
};

/// 1e-3 * min(1, 1 / V''(R)).
double default_time_step(const Potential& pot);

/// One classical RK4 step of dx_i/dt = -sum_j m_j V'(x_i - x_j) with masses
/// held fixed, followed by merge_atoms(merge_tol). Throws NumericalError if
/// any position becomes non-finite.
DiscreteMeasure step(const Potential& pot, const DiscreteMeasure& mu, double dt,
                     double merge_tol = 1e-9);

/// Integrates until the steady residual drops to residual_tol, the atom
/// count reaches 1, or max_time is reached.
FlowTrajectory simulate(const Potential& pot, const DiscreteMeasure& mu0, const FlowOptions& opts);

/// CSV with header time,energy,atom_count (one row per snapshot).
void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj);

/// One JSON object per snapshot: {"time":..,"energy":..,"atoms":[[x,m],..]}.
void write_snapshots_jsonl(std::ostream& out, const FlowTrajectory& traj);

}  // namespace mildrep
