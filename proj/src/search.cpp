#include "mildrep/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>

#include <Eigen/Dense>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/parallel.hpp"

namespace mildrep {
namespace {

constexpr double kArmijo = 1e-4;
constexpr int kMaxHalvings = 40;
constexpr double kMassFloor = 1e-10;
constexpr double kMaxMove = 0.1;
constexpr double kPolishBelow = 1e-5;

double max_abs(const std::vector<double>& v) {
    double r = 0;
    for (double x : v) r = std::max(r, std::abs(x));
    return r;
}

double spread(const std::vector<double>& v) {
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

// Euclidean projection onto the probability simplex (sort-based).
std::vector<double> project_simplex(const std::vector<double>& y) {
    std::vector<double> u(y);
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumsum = 0;
    double theta = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumsum += u[k];
        const double t = (cumsum - 1.0) / static_cast<double>(k + 1);
        if (u[k] - t > 0) theta = t;
    }
    std::vector<double> out(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) out[i] = std::max(0.0, y[i] - theta);
    return out;
}

struct State {
    std::vector<double> x;
    std::vector<double> m;
};

State to_state(const DiscreteMeasure& mu) { return {mu.positions(), mu.masses()}; }

// Rebuilds the state through a measure: sorts, merges close atoms, drops
// negligible masses and renormalizes.
State tidy(const State& s, double merge_tol) {
    std::vector<Atom> atoms;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        if (s.m[i] >= kMassFloor) atoms.push_back({s.x[i], s.m[i]});
    }
    auto mu = DiscreteMeasure::from_atoms(atoms);
    return to_state(merge_atoms(mu, merge_tol));
}

// Exact minimizer of the quadratic E(m) = 1/2 m^T A m on the current face
// {sum m = 1}, if it exists with all masses positive.
std::optional<std::vector<double>> face_newton(const Potential& pot, const State& s) {
    const std::size_t n = s.x.size();
    if (n < 2) return std::nullopt;
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n + 1, n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) K(i, j) = pot.value(s.x[i] - s.x[j]);
        K(i, n) = 1.0;
        K(n, i) = 1.0;
    }
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
    rhs(n) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(K);
    if (!lu.isInvertible()) return std::nullopt;
    const Eigen::VectorXd sol = lu.solve(rhs);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(sol(i) > kMassFloor) || !std::isfinite(sol(i))) return std::nullopt;
        m[i] = sol(i);
    }
    return m;
}

// Near a stationary point Armijo cannot resolve energy changes below
// rounding noise, so the last digits of the residual come from Newton
// steps on the positions. The Hessian is singular along translations; the
// minimum-norm solution ignores that direction.
std::optional<std::vector<double>> position_newton(const Potential& pot, const State& s,
                                                   const std::vector<double>& force) {
    const std::size_t n = s.x.size();
    if (n < 2) return std::nullopt;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd g(n);
    for (std::size_t i = 0; i < n; ++i) {
        g(i) = s.m[i] * force[i];
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double c = s.m[i] * s.m[j] * pot.second(s.x[i] - s.x[j]);
            H(i, j) = -c;
            H(i, i) += c;
        }
    }
    const Eigen::VectorXd d = H.completeOrthogonalDecomposition().solve(-g);
    if (!d.allFinite() || d.cwiseAbs().maxCoeff() > kMaxMove) return std::nullopt;
    std::vector<double> x(s.x);
    for (std::size_t i = 0; i < n; ++i) x[i] += d(i);
    return x;
}

double rounding_noise(const Potential& pot, const State& s) {
    double scale = 0;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
        for (std::size_t j = i + 1; j < s.x.size(); ++j) scale += s.m[i] * s.m[j] * std::abs(pot.value(s.x[i] - s.x[j]));
    }
    return 64 * std::numeric_limits<double>::epsilon() * scale;
}

}  // namespace

SearchResult local_minimize(const Potential& pot, const DiscreteMeasure& start,
                            const SearchOptions& opts) {
    if (!(opts.tol > 0)) throw DomainError("search tolerance must be positive");
    State s = tidy(to_state(start), opts.merge_tol);
    double energy = interaction_energy(pot, s.x, s.m);
    double pos_step = 1.0;
    double mass_step = 1.0;
    SearchResult res{.minimizer = start};
    if (opts.record_trace) res.energy_trace.push_back(energy);

    bool converged = false;
    std::size_t iter = 0;
    for (; iter < opts.max_iters; ++iter) {
        const auto force = atom_forces(pot, s.x, s.m);
        const double residual = max_abs(force);
        double mass_residual = 0;
        std::vector<double> mass_grad;
        if (opts.optimize_masses && s.x.size() > 1) {
            mass_grad = mass_gradient(pot, s.x, s.m);
            mass_residual = spread(mass_grad);
        }
        if (residual <= opts.tol && mass_residual <= opts.tol) {
            converged = true;
            break;
        }
        bool moved = false;

        // Positions: Newton polish close to convergence, otherwise move along
        // the velocity field.
        bool polished = false;
        if (residual > opts.tol && residual < kPolishBelow) {
            if (auto x = position_newton(pot, s, force)) {
                const double e = interaction_energy(pot, *x, s.m);
                const double r = max_abs(atom_forces(pot, *x, s.m));
                if (r < 0.5 * residual && e <= energy + rounding_noise(pot, s)) {
                    s.x = std::move(*x);
                    energy = e;
                    polished = moved = true;
                }
            }
        }
        if (residual > opts.tol && !polished) {
            double slope = 0;  // directional derivative of E along -force
            for (std::size_t i = 0; i < force.size(); ++i) slope -= s.m[i] * force[i] * force[i];
            double t = std::min(2 * pos_step, kMaxMove / residual);
            for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
                std::vector<double> trial(s.x);
                for (std::size_t i = 0; i < trial.size(); ++i) trial[i] -= t * force[i];
                const double e = interaction_energy(pot, trial, s.m);
                if (e <= energy + kArmijo * t * slope) {
                    s.x = std::move(trial);
                    energy = e;
                    pos_step = t;
                    moved = true;
                    break;
                }
            }
        }

        // Masses: projected gradient on the simplex.
        if (opts.optimize_masses && s.x.size() > 1) {
            mass_grad = mass_gradient(pot, s.x, s.m);
            mass_residual = spread(mass_grad);
            if (mass_residual > opts.tol) {
                double t = std::min(2 * mass_step, 1e6);
                for (int h = 0; h <= kMaxHalvings; ++h, t *= 0.5) {
                    std::vector<double> y(s.m);
                    for (std::size_t i = 0; i < y.size(); ++i) y[i] -= t * mass_grad[i];
                    const auto trial = project_simplex(y);
                    double lin = 0;
                    for (std::size_t i = 0; i < y.size(); ++i) lin += mass_grad[i] * (trial[i] - s.m[i]);
                    if (lin >= 0) continue;
                    const double e = interaction_energy(pot, s.x, trial);
                    if (e <= energy + kArmijo * lin) {
                        s.m = trial;
                        energy = e;
                        mass_step = t;
                        moved = true;
                        break;
                    }
                }
                if (mass_residual < 1e-4) {
                    if (auto m = face_newton(pot, s)) {
                        const double e = interaction_energy(pot, s.x, *m);
                        if (e <= energy + rounding_noise(pot, s)) {
                            moved = moved || e < energy || *m != s.m;
                            s.m = std::move(*m);
                            energy = e;
                        }
                    }
                }
            }
        }

        const std::size_t before = s.x.size();
        s = tidy(s, opts.merge_tol);
        if (s.x.size() != before || opts.optimize_masses) energy = interaction_energy(pot, s.x, s.m);
        if (opts.record_trace) res.energy_trace.push_back(energy);
        if (!moved && s.x.size() == before) break;
    }

    std::vector<Atom> atoms(s.x.size());
    for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i] = {s.x[i], s.m[i]};
    res.minimizer = canonicalize(DiscreteMeasure::from_atoms(atoms));
    res.energy = interaction_energy(pot, res.minimizer);
    res.residual = steady_residual(pot, res.minimizer);
    if (opts.optimize_masses && res.minimizer.size() > 1) {
        const auto x = res.minimizer.positions();
        const auto m = res.minimizer.masses();
        res.mass_residual = spread(mass_gradient(pot, x, m));
    }
    res.converged = converged || (res.residual <= opts.tol && res.mass_residual <= opts.tol);
    res.iterations = iter;
    return res;
}

SearchResult global_search(const Potential& pot, std::size_t n_atoms, std::size_t n_starts,
                           std::uint64_t seed, SearchOptions opts) {
    if (n_atoms < 1) throw DomainError("global_search needs at least one atom");
    if (n_starts < 1) throw DomainError("global_search needs at least one start");
    opts.optimize_masses = true;
    const double R = pot.zero_radius();
    std::vector<std::optional<SearchResult>> results(n_starts);
    parallel_for(n_starts, opts.threads, [&](std::size_t k) {
        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        std::mt19937_64 rng(seq);
        std::uniform_real_distribution<double> pos(0.0, R);
        std::vector<Atom> atoms(n_atoms);
        for (auto& a : atoms) a = {pos(rng), 1.0 / static_cast<double>(n_atoms)};
        results[k] = local_minimize(pot, DiscreteMeasure::from_atoms(atoms), opts);
    });
    std::size_t best = 0;
    for (std::size_t k = 1; k < n_starts; ++k) {
        if (results[k]->energy < results[best]->energy) best = k;
    }
    SearchResult out = std::move(*results[best]);
    out.starts = n_starts;
    out.best_start_index = best;
    return out;
}

ProbeResult perturb_probe(const Potential& pot, const DiscreteMeasure& mu, double epsilon,
                          std::size_t n_samples, std::uint64_t seed) {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) throw DomainError("probe radius must be positive");
    const double base = interaction_energy(pot, mu);
    const std::size_t n = mu.size();
    ProbeResult out;
    out.delta = std::numeric_limits<double>::infinity();

    auto consider = [&](const std::vector<Atom>& atoms) {
        auto candidate = DiscreteMeasure::from_atoms(atoms);
        const double delta = interaction_energy(pot, candidate) - base;
        ++out.evaluated;
        if (delta < out.delta) {
            out.delta = delta;
            if (delta < -1e-12) out.witness = std::move(candidate);
        }
    };

    std::vector<double> grid;
    for (int k = 1; k <= 20; ++k) grid.push_back(epsilon * k / 20.0);
    for (int j = 1; j <= 12; ++j) grid.push_back(epsilon * std::ldexp(1.0, -j));

    for (std::size_t i = 0; i < n; ++i) {
        const Atom a = mu[i];
        for (double x : grid) {
            std::vector<Atom> atoms(mu.atoms().begin(), mu.atoms().end());
            atoms[i] = {a.position - x, 0.5 * a.mass};
            atoms.push_back({a.position + x, 0.5 * a.mass});
            consider(atoms);
            for (double dir : {-1.0, 1.0}) {
                const double w = std::min(x * x, 0.5 * a.mass);
                std::vector<Atom> leak(mu.atoms().begin(), mu.atoms().end());
                leak[i].mass -= w;
                leak.push_back({a.position + dir * x, w});
                consider(leak);
            }
        }
    }

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      0x9e3779b9u};
    std::mt19937_64 rng(seq);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pieces(1, 3);
    for (std::size_t s = 0; s < n_samples; ++s) {
        std::vector<Atom> atoms;
        atoms.reserve(3 * n);
        for (const Atom& a : mu.atoms()) {
            const int k = pieces(rng);
            std::vector<double> w(k);
            for (double& v : w) v = -std::log(1.0 - unit(rng));  // Dirichlet(1,..,1)
            const double total = std::accumulate(w.begin(), w.end(), 0.0);
            for (int f = 0; f < k; ++f) {
                const double shift = epsilon * (2 * unit(rng) - 1);
                atoms.push_back({a.position + shift, a.mass * w[f] / total});
            }
        }
        consider(atoms);
    }
    out.found_descent = out.delta < -1e-12;
    if (!out.found_descent) out.witness.reset();
    return out;
}

}  // namespace mildrep
