#include "cli.hpp"

#include <cmath>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mildrep/classify.hpp"
#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/flow.hpp"
#include "mildrep/io.hpp"
#include "mildrep/moment.hpp"
#include "mildrep/parallel.hpp"
#include "mildrep/phase.hpp"
#include "mildrep/search.hpp"
#include "mildrep/transport.hpp"

namespace mildrep::cli {
namespace {

using nlohmann::json;

struct MeasureSource {
    std::string file;
    std::optional<double> two_dirac;

    void attach(CLI::App* app) {
        auto* f = app->add_option("--measure", file, "Measure JSON file {\"atoms\": [[x, m], ...]}");
        auto* t = app->add_option("--two-dirac", two_dirac, "Use m δ_0 + (1-m) δ_1");
        f->excludes(t);
    }

    DiscreteMeasure load() const {
        if (two_dirac) return DiscreteMeasure::two_dirac(*two_dirac);
        if (file.empty()) throw DomainError("a measure is required (--measure FILE or --two-dirac M)");
        return read_measure_file(file);
    }
};

struct PotentialFlags {
    double p = 0;
    double q = 0;

    void attach(CLI::App* app) {
        app->add_option("--p", p, "Attractive exponent")->required();
        app->add_option("--q", q, "Repulsive exponent (q >= 2)")->required();
    }
    Potential make() const { return Potential(p, q); }
};

std::vector<double> parse_grid(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw DomainError("bad grid value '" + item + "'");
        }
    }
    if (out.empty()) throw DomainError("empty grid");
    return out;
}

// Rejects NaN/Inf anywhere in a document before it is emitted.
void require_finite(const json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>())) {
        throw NumericalError("result contains a non-finite number");
    }
    if (j.is_structured()) {
        for (const auto& v : j) require_finite(v);
    }
}

json search_json(const SearchResult& r) {
    json j = measure_to_json(r.minimizer);
    j["energy"] = r.energy;
    j["residual"] = r.residual;
    j["mass_residual"] = r.mass_residual;
    j["converged"] = r.converged;
    j["starts"] = r.starts;
    j["best_start_index"] = r.best_start_index;
    j["iterations"] = r.iterations;
    return j;
}

json witness_json(const Witness& w) {
    json j = measure_to_json(w.measure);
    j["family"] = std::string(to_string(w.family));
    j["parameter"] = w.parameter;
    if (w.family == WitnessFamily::MassLeak) j["alpha"] = w.alpha;
    j["energy_drop"] = w.energy_drop;
    j["distance"] = w.distance;
    return j;
}

json classification_json(double p, double q, double m, const Classification& c) {
    json j{{"p", p},
           {"q", q},
           {"m", m},
           {"verdict", std::string(to_string(c.verdict))},
           {"case", c.case_id},
           {"on_boundary", c.on_boundary},
           {"margin", c.margin}};
    j["witness"] = c.witness ? witness_json(*c.witness) : json(nullptr);
    return j;
}

json distribution_json(const MomentDistribution& d) {
    json atoms = json::array();
    for (std::size_t i = 0; i < d.positions.size(); ++i) atoms.push_back({d.positions[i], d.weights[i]});
    return {{"n", d.n}, {"c", d.c}, {"atoms", atoms}};
}

void emit(std::ostream& out, const json& j) {
    require_finite(j);
    out << j.dump() << '\n';
}

void error_json(std::ostream& err, const std::string& kind, const std::string& message) {
    err << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out_default, std::ostream& err) {
    CLI::App app{"Interaction energy of 1D power-law potentials: energies, transport distances, "
                 "gradient flow, minimization and two-Dirac classification"};
    app.require_subcommand(1);
    app.fallthrough();
    unsigned threads = 0;
    std::string output_path;
    app.add_option("--threads", threads, "Worker threads (default: MILDREP_THREADS or all cores)");
    app.add_option("-o,--output", output_path, "Write the main output to FILE instead of stdout");

    // energy
    auto* energy_cmd = app.add_subcommand("energy", "Interaction energy, gradient and steady residual");
    PotentialFlags energy_pot;
    MeasureSource energy_measure;
    energy_pot.attach(energy_cmd);
    energy_measure.attach(energy_cmd);

    // wasserstein
    auto* w_cmd = app.add_subcommand("wasserstein", "Wasserstein distance between two measure files");
    std::string lambda_text = "1";
    std::string file_a;
    std::string file_b;
    bool with_coupling = false;
    w_cmd->add_option("--lambda", lambda_text, "Exponent >= 1, or 'inf'");
    w_cmd->add_option("a", file_a, "First measure file")->required();
    w_cmd->add_option("b", file_b, "Second measure file")->required();
    w_cmd->add_flag("--coupling", with_coupling, "Also print the monotone coupling");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "Particle gradient flow; trajectory as CSV");
    PotentialFlags sim_pot;
    MeasureSource sim_measure;
    std::optional<double> sim_dt;
    double sim_tmax = 10.0;
    double sim_tol = 1e-10;
    std::size_t sim_every = 1;
    std::string snapshots_path;
    sim_pot.attach(sim_cmd);
    sim_measure.attach(sim_cmd);
    sim_cmd->add_option("--dt", sim_dt, "RK4 step (default 1e-3 min(1, 1/V''(R)))");
    sim_cmd->add_option("--tmax", sim_tmax, "Maximum time");
    sim_cmd->add_option("--residual-tol", sim_tol, "Stop when max |V' * rho| on the support drops below this");
    sim_cmd->add_option("--snapshot-every", sim_every, "Record every k-th step");
    sim_cmd->add_option("--snapshots", snapshots_path, "Write snapshots as JSON lines to FILE");

    // minimize
    auto* min_cmd = app.add_subcommand("minimize", "Local descent from a measure, or multi-start search");
    PotentialFlags min_pot;
    MeasureSource min_measure;
    std::optional<std::size_t> min_atoms;
    std::size_t min_starts = 16;
    std::uint64_t min_seed = 1;
    SearchOptions min_opts;
    min_pot.attach(min_cmd);
    min_measure.attach(min_cmd);
    min_cmd->add_option("--atoms", min_atoms, "Multi-start search with this many atoms per start");
    min_cmd->add_option("--starts", min_starts, "Number of starts for multi-start search");
    min_cmd->add_option("--seed", min_seed, "RNG seed");
    min_cmd->add_option("--tol", min_opts.tol, "Residual tolerance");
    min_cmd->add_option("--max-iters", min_opts.max_iters, "Iteration cap per start");
    min_cmd->add_flag("--optimize-masses", min_opts.optimize_masses, "Also optimize masses (local mode)");

    // classify
    auto* cls_cmd = app.add_subcommand("classify", "Classify m δ_0 + (1-m) δ_1 (single point or grid CSV)");
    std::optional<double> cls_p;
    std::optional<double> cls_m;
    double cls_q = 2.0;
    std::string cls_p_grid;
    std::string cls_m_grid;
    cls_cmd->add_option("--p", cls_p, "Attractive exponent");
    cls_cmd->add_option("--q", cls_q, "Repulsive exponent");
    cls_cmd->add_option("--m", cls_m, "Mass at the origin");
    cls_cmd->add_option("--p-grid", cls_p_grid, "Comma-separated p values (grid mode)");
    cls_cmd->add_option("--m-grid", cls_m_grid, "Comma-separated m values (grid mode)");

    // prop-test
    auto* prop_cmd = app.add_subcommand("prop-test", "Randomized check of the odd-moment inequality");
    int prop_n = 1;
    double prop_M = 1.0;
    std::size_t prop_trials = 1000;
    std::uint64_t prop_seed = 1;
    int prop_grid = 12;
    bool prop_sharp = false;
    prop_cmd->add_option("--n", prop_n, "Order n (1..4)");
    prop_cmd->add_option("--M", prop_M, "Constant M > 0");
    prop_cmd->add_option("--trials", prop_trials, "Number of sampled distributions");
    prop_cmd->add_option("--seed", prop_seed, "RNG seed");
    prop_cmd->add_option("--grid-size", prop_grid, "Support grid size");
    prop_cmd->add_flag("--sharpness", prop_sharp, "Also report the two sharpness counterexamples (n = 1)");

    // phase-scan
    auto* phase_cmd = app.add_subcommand("phase-scan", "Global search over a p grid at fixed q (CSV)");
    double phase_q = 2.0;
    std::string phase_grid;
    std::size_t phase_atoms = 6;
    std::size_t phase_starts = 16;
    std::uint64_t phase_seed = 1;
    phase_cmd->add_option("--q", phase_q, "Repulsive exponent")->required();
    phase_cmd->add_option("--p-grid", phase_grid, "Comma-separated ascending p values")->required();
    phase_cmd->add_option("--atoms", phase_atoms, "Atoms per start");
    phase_cmd->add_option("--starts", phase_starts, "Starts per grid point");
    phase_cmd->add_option("--seed", phase_seed, "RNG seed");

    // thresholds
    auto* thr_cmd = app.add_subcommand("thresholds", "f, g, q* and p_lower at a given q");
    double thr_q = 2.0;
    std::optional<double> thr_p;
    thr_cmd->add_option("--q", thr_q, "Repulsive exponent (0 < q <= 3)")->required();
    thr_cmd->add_option("--p", thr_p, "Also evaluate f(p, q)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out_default << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        error_json(err, "validation", e.what());
        return 1;
    }

    std::ofstream file_out;
    if (!output_path.empty()) {
        file_out.open(output_path);
        if (!file_out) {
            error_json(err, "validation", "cannot open output file " + output_path);
            return 1;
        }
    }
    std::ostream& out = output_path.empty() ? out_default : file_out;
    if (threads == 0) threads = default_thread_count();

    try {
        if (*energy_cmd) {
            const auto pot = energy_pot.make();
            const auto mu = energy_measure.load();
            const auto rep = energy_report(pot, mu);
            json j = measure_to_json(mu);
            j["p"] = pot.p();
            j["q"] = pot.q();
            j["energy"] = rep.energy;
            j["steady_residual"] = rep.steady_residual;
            j["position_gradient"] = rep.position_gradient;
            emit(out, j);
        } else if (*w_cmd) {
            const auto a = read_measure_file(file_a);
            const auto b = read_measure_file(file_b);
            json j;
            if (lambda_text == "inf") {
                j["lambda"] = "inf";
                j["distance"] = d_inf(a, b);
            } else {
                double lambda = 0;
                try {
                    lambda = std::stod(lambda_text);
                } catch (const std::exception&) {
                    throw DomainError("--lambda must be a number >= 1 or 'inf'");
                }
                j["lambda"] = lambda;
                j["distance"] = d_lambda(a, b, lambda);
            }
            if (with_coupling) {
                json cells = json::array();
                for (const auto& e : monotone_coupling(a, b).entries) cells.push_back({e.source, e.target, e.mass});
                j["coupling"] = cells;
            }
            emit(out, j);
        } else if (*sim_cmd) {
            const auto pot = sim_pot.make();
            FlowOptions opts;
            opts.dt = sim_dt.value_or(default_time_step(pot));
            opts.max_time = sim_tmax;
            opts.residual_tol = sim_tol;
            opts.snapshot_every = sim_every;
            const auto traj = simulate(pot, sim_measure.load(), opts);
            for (const auto& s : traj.snapshots) {
                if (!std::isfinite(s.energy)) throw NumericalError("non-finite energy in trajectory");
            }
            write_trajectory_csv(out, traj);
            if (!snapshots_path.empty()) {
                std::ofstream snaps(snapshots_path);
                if (!snaps) throw DomainError("cannot open snapshot file " + snapshots_path);
                write_snapshots_jsonl(snaps, traj);
            }
        } else if (*min_cmd) {
            const auto pot = min_pot.make();
            min_opts.threads = threads;
            SearchResult r = min_atoms ? global_search(pot, *min_atoms, min_starts, min_seed, min_opts)
                                       : local_minimize(pot, min_measure.load(), min_opts);
            emit(out, search_json(r));
        } else if (*cls_cmd) {
            if (!cls_p_grid.empty() || !cls_m_grid.empty()) {
                const auto ps = cls_p_grid.empty() ? std::vector<double>{cls_p.value_or(0)} : parse_grid(cls_p_grid);
                const auto ms = cls_m_grid.empty() ? std::vector<double>{cls_m.value_or(0)} : parse_grid(cls_m_grid);
                std::vector<std::pair<double, double>> points;
                for (double p : ps) {
                    for (double m : ms) points.emplace_back(p, m);
                }
                std::vector<std::optional<Classification>> results(points.size());
                parallel_for(points.size(), threads, [&](std::size_t i) {
                    const auto [p, m] = points[i];
                    if (p > cls_q) results[i] = classify_analytic(p, cls_q, m);
                });
                out << "p,q,m,verdict,case,on_boundary,margin,witness_family,witness_parameter,energy_drop\n";
                for (std::size_t i = 0; i < points.size(); ++i) {
                    if (!results[i]) continue;
                    const auto& c = *results[i];
                    out << format_double(points[i].first) << ',' << format_double(cls_q) << ','
                        << format_double(points[i].second) << ',' << to_string(c.verdict) << ','
                        << c.case_id << ',' << (c.on_boundary ? "true" : "false") << ','
                        << format_double(c.margin) << ',';
                    if (c.witness) {
                        out << to_string(c.witness->family) << ',' << format_double(c.witness->parameter)
                            << ',' << format_double(c.witness->energy_drop);
                    } else {
                        out << ",,";
                    }
                    out << '\n';
                }
            } else {
                if (!cls_p || !cls_m) throw DomainError("classify needs --p and --m (or --p-grid/--m-grid)");
                emit(out, classification_json(*cls_p, cls_q, *cls_m, classify_analytic(*cls_p, cls_q, *cls_m)));
            }
        } else if (*prop_cmd) {
            const auto rep = verify_batch(prop_n, prop_M, prop_trials, prop_seed, prop_grid, threads);
            json j{{"n", prop_n},       {"M", prop_M},
                   {"c", rep.c},        {"trials", rep.trials},
                   {"min_lhs", rep.min_lhs}, {"violations", rep.violations},
                   {"worst", distribution_json(rep.worst)}};
            if (prop_sharp) {
                const auto cx = sharpness_counterexample(SharpnessVariant::replace_c(2.5), 1, prop_M);
                const auto fx = sharpness_counterexample(SharpnessVariant::replace_fourth_moment(), 1, prop_M);
                j["sharpness"] = {
                    {"replace_c_2_5", {{"value", cx.value}, {"t", cx.t}, {"distribution", distribution_json(cx.distribution)}}},
                    {"replace_fourth_moment",
                     {{"value", fx.value}, {"t", fx.t}, {"distribution", distribution_json(fx.distribution)}}}};
            }
            emit(out, j);
        } else if (*phase_cmd) {
            SearchOptions opts;
            opts.threads = threads;
            const auto scan = p_star_scan(phase_q, parse_grid(phase_grid), phase_atoms, phase_starts, phase_seed, opts);
            out << "q,p,best_energy,two_dirac_energy,is_two_dirac_optimal,best_atoms_json\n";
            for (const auto& pt : scan.points) {
                out << format_double(pt.q) << ',' << format_double(pt.p) << ','
                    << format_double(pt.global_best_energy) << ',' << format_double(pt.two_dirac_energy) << ','
                    << (pt.is_two_dirac_optimal ? "true" : "false") << ','
                    << csv_field(measure_to_json(pt.atoms_of_best).dump()) << '\n';
            }
        } else if (*thr_cmd) {
            json j{{"q", thr_q}, {"g", g_of_q(thr_q)}, {"q_star", q_star()}};
            const auto pl = p_lower(thr_q);
            j["p_lower"] = pl ? json(*pl) : json(nullptr);
            if (thr_p) j["f"] = f_of_p(*thr_p, thr_q);
            emit(out, j);
        }
    } catch (const DomainError& e) {
        error_json(err, "validation", e.what());
        return 1;
    } catch (const NumericalError& e) {
        error_json(err, "numerical", e.what());
        return 2;
    } catch (const std::exception& e) {
        error_json(err, "numerical", e.what());
        return 2;
    }
    return 0;
}

}  // namespace mildrep::cli
