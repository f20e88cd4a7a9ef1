#include "mildrep/flow.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/io.hpp"

namespace mildrep {

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::ResidualBelowTol: return "ResidualBelowTol";
        case Termination::MaxTime: return "MaxTime";
        case Termination::MergeCollapse: return "MergeCollapse";
    }
    return "?";
}

double default_time_step(const Potential& pot) {
    const double stiffness = pot.second(pot.zero_radius());
    return 1e-3 * std::min(1.0, 1.0 / stiffness);
}

namespace {

std::vector<double> velocities(const Potential& pot, std::span<const double> x,
                               std::span<const double> m) {
    auto v = atom_forces(pot, x, m);
    for (double& vi : v) vi = -vi;
    return v;
}

std::vector<double> rk4_positions(const Potential& pot, const std::vector<double>& x,
                                  const std::vector<double>& m, double dt) {
    const std::size_t n = x.size();
    std::vector<double> tmp(n);
    const auto k1 = velocities(pot, x, m);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k1[i];
    const auto k2 = velocities(pot, tmp, m);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + 0.5 * dt * k2[i];
    const auto k3 = velocities(pot, tmp, m);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = x[i] + dt * k3[i];
    const auto k4 = velocities(pot, tmp, m);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = x[i] + dt / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
        if (!std::isfinite(out[i])) {
            throw NumericalError("flow blew up (non-finite position); reduce dt");
        }
    }
    return out;
}

}  // namespace

DiscreteMeasure step(const Potential& pot, const DiscreteMeasure& mu, double dt, double merge_tol) {
    if (!(dt > 0) || !std::isfinite(dt)) throw DomainError("time step must be positive");
    const auto x = mu.positions();
    const auto m = mu.masses();
    const auto next = rk4_positions(pot, x, m, dt);
    return merge_atoms(mu.with_positions(next), merge_tol);
}

FlowTrajectory simulate(const Potential& pot, const DiscreteMeasure& mu0, const FlowOptions& opts) {
    if (!(opts.dt > 0) || !std::isfinite(opts.dt)) throw DomainError("dt must be positive");
    if (!(opts.max_time > 0)) throw DomainError("max_time must be positive");
    if (!(opts.residual_tol > 0)) throw DomainError("residual_tol must be positive");
    if (opts.snapshot_every == 0) throw DomainError("snapshot_every must be at least 1");

    FlowTrajectory traj;
    DiscreteMeasure mu = merge_atoms(mu0, opts.merge_tol);
    double energy = interaction_energy(pot, mu);
    double t = 0.0;
    traj.snapshots.push_back({t, mu, energy});
    double residual = steady_residual(pot, mu);

    auto finish = [&](Termination reason) {
        traj.reason = reason;
        traj.final_residual = residual;
        if (traj.snapshots.back().time != t) traj.snapshots.push_back({t, mu, energy});
        return traj;
    };

    if (residual <= opts.residual_tol) return finish(Termination::ResidualBelowTol);
    if (mu.size() == 1) return finish(Termination::MergeCollapse);

    // Step count is derived up front so that accumulated rounding in t
    // cannot add or drop a step.
    const auto total_steps = static_cast<std::size_t>(std::ceil(opts.max_time / opts.dt - 1e-9));
    for (std::size_t k = 1; k <= total_steps; ++k) {
        const std::size_t before = mu.size();
        mu = step(pot, mu, opts.dt, opts.merge_tol);
        if (mu.size() < before) traj.merge_events += before - mu.size();
        t = static_cast<double>(k) * opts.dt;
        const double next_energy = interaction_energy(pot, mu);
        traj.max_energy_increase = std::max(traj.max_energy_increase, next_energy - energy);
        energy = next_energy;
        residual = steady_residual(pot, mu);
        ++traj.steps;
        if (residual <= opts.residual_tol) return finish(Termination::ResidualBelowTol);
        if (mu.size() == 1) return finish(Termination::MergeCollapse);
        if (k % opts.snapshot_every == 0) traj.snapshots.push_back({t, mu, energy});
    }
    return finish(Termination::MaxTime);
}

void write_trajectory_csv(std::ostream& out, const FlowTrajectory& traj) {
    out << "time,energy,atom_count\n";
    for (const auto& s : traj.snapshots) {
        out << format_double(s.time) << ',' << format_double(s.energy) << ','
            << s.measure.size() << '\n';
    }
}

void write_snapshots_jsonl(std::ostream& out, const FlowTrajectory& traj) {
    for (const auto& s : traj.snapshots) {
        auto j = measure_to_json(s.measure);
        j["time"] = s.time;
        j["energy"] = s.energy;
        out << j.dump() << '\n';
    }
}

}  // namespace mildrep
