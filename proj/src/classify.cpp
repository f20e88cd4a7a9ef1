#include "mildrep/classify.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mildrep/energy.hpp"
#include "mildrep/errors.hpp"
#include "mildrep/potential.hpp"
#include "mildrep/transport.hpp"

namespace mildrep {
namespace {

constexpr double kBoundaryTol = 1e-12;
constexpr double kWitnessRadius = 1e-2;
// Search strictly inside the witness ball: 1 - (1 - x) can round above x.
constexpr double kInnerRadius = kWitnessRadius * (1 - 1e-9);
constexpr double kLeakAlpha = 2.0;

bool near(double a, double b) { return std::abs(a - b) <= kBoundaryTol; }

void check_domain(double p, double q, double m) {
    if (!std::isfinite(p) || !std::isfinite(q) || !std::isfinite(m)) {
        throw DomainError("classification parameters must be finite");
    }
    if (!(p > q) || !(q >= 2)) throw DomainError("classification requires p > q >= 2");
    if (!(m > 0 && m < 1)) throw DomainError("classification requires 0 < m < 1");
}

double quadratic_margin(const Potential& pot, double m) {
    const double a = -pot.second(0.0) / 2;
    const double b = pot.second(1.0) / 2;
    const double m0 = m;
    const double m1 = 1 - m;
    return std::min(b * m0 * m1 - a * m0 * m0, b * m0 * m1 - a * m1 * m1);
}

// Golden-section refinement of a sampled minimum over (0, hi].
template <typename F>
std::pair<double, double> line_minimize(F&& f, double hi) {
    double best_x = hi;
    double best_f = f(hi);
    std::vector<double> grid;
    for (int k = 1; k <= 200; ++k) grid.push_back(hi * k / 200.0);
    for (int j = 1; j <= 30; ++j) grid.push_back(hi * std::ldexp(1.0, -j));
    for (double x : grid) {
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    double lo = std::max(best_x - hi / 200.0, best_x * 0.5);
    double up = std::min(best_x + hi / 200.0, hi);
    const double phi = 0.5 * (std::sqrt(5.0) - 1);
    for (int it = 0; it < 80; ++it) {
        const double x1 = up - phi * (up - lo);
        const double x2 = lo + phi * (up - lo);
        if (f(x1) < f(x2)) {
            up = x2;
        } else {
            lo = x1;
        }
    }
    const double x = 0.5 * (lo + up);
    const double v = f(x);
    if (v < best_f) return {x, v};
    return {best_x, best_f};
}

}  // namespace

std::string_view to_string(Verdict v) {
    return v == Verdict::StrictLocalMin ? "StrictLocalMin" : "Saddle";
}

std::string_view to_string(WitnessFamily f) {
    switch (f) {
        case WitnessFamily::SplitRight: return "SplitRight";
        case WitnessFamily::SplitLeft: return "SplitLeft";
        case WitnessFamily::MassLeak: return "MassLeak";
    }
    return "?";
}

Classification classify_verdict(double p, double q, double m) {
    check_domain(p, q, m);
    const Potential pot(p, q);
    Classification c{.verdict = Verdict::StrictLocalMin, .case_id = 1, .on_boundary = false,
                     .margin = quadratic_margin(pot, m), .witness = std::nullopt};
    if (!near(q, 2.0)) return c;
    if (q != 2.0) c.on_boundary = true;
    if (near(p, 3.0)) {
        if (p != 3.0) c.on_boundary = true;
        if (near(m, 0.5)) {
            c.case_id = 6;
            c.on_boundary = c.on_boundary || m != 0.5;
            return c;
        }
        c.verdict = Verdict::Saddle;
        c.case_id = 5;
        return c;
    }
    if (p < 3) {
        c.verdict = Verdict::Saddle;
        c.case_id = 4;
        return c;
    }
    const double lower = 1.0 / (p - 1);
    const double upper = (p - 2) / (p - 1);
    if (near(m, lower) || near(m, upper)) {
        c.verdict = Verdict::Saddle;
        c.case_id = 3;
        c.on_boundary = true;
        return c;
    }
    if (m > lower && m < upper) {
        c.case_id = 2;
        return c;
    }
    c.verdict = Verdict::Saddle;
    c.case_id = 3;
    return c;
}

Classification classify_analytic(double p, double q, double m) {
    Classification c = classify_verdict(p, q, m);
    if (c.verdict == Verdict::Saddle) c.witness = saddle_witness(p, q, m);
    return c;
}

double split_second_derivative(double p, double q, double m, SplitSide side) {
    if (q != 2.0) throw DomainError("split_second_derivative is only available for q = 2");
    if (!(p > 2)) throw DomainError("split_second_derivative requires p > 2");
    if (!(m > 0 && m < 1)) throw DomainError("split_second_derivative requires 0 < m < 1");
    if (side == SplitSide::Right) return -(p - 1) * m * (m - (p - 2) / (p - 1));
    return (1 - m) * (m * (p - 2) - (1 - m));
}

double split_family_energy(double p, double q, double m, SplitSide side, double x) {
    const Potential pot(p, q);
    const double split = side == SplitSide::Right ? m : 1 - m;
    const double other = 1 - split;
    return split * split / 4 * pot.value(2 * x) +
           split * other / 2 * (pot.value(1 + x) + pot.value(1 - x));
}

DiscreteMeasure split_family_measure(double m, SplitSide side, double x) {
    std::vector<Atom> atoms;
    if (side == SplitSide::Right) {
        atoms = {{-x, m / 2}, {x, m / 2}, {1.0, 1 - m}};
    } else {
        atoms = {{0.0, m}, {1 - x, (1 - m) / 2}, {1 + x, (1 - m) / 2}};
    }
    return DiscreteMeasure::from_atoms(atoms);
}

DiscreteMeasure leak_family_measure(double m, double eta, double alpha) {
    const double leaked = std::pow(eta, alpha);
    std::vector<Atom> atoms;
    if (m >= 0.5) {
        atoms = {{0.0, m - leaked}, {eta, leaked}, {1.0, 1 - m}};
    } else {
        atoms = {{0.0, m}, {1 - eta, leaked}, {1.0, 1 - m - leaked}};
    }
    return DiscreteMeasure::from_atoms(atoms);
}

Witness saddle_witness(double p, double q, double m) {
    const Classification c = classify_verdict(p, q, m);
    if (c.verdict != Verdict::Saddle) {
        throw DomainError("saddle_witness: rho_m* is a strict local minimizer here");
    }
    const Potential pot(p, q);
    const auto star = DiscreteMeasure::two_dirac(m);
    const double base = interaction_energy(pot, star);

    Witness w{.family = WitnessFamily::SplitRight, .parameter = 0, .alpha = 0,
              .energy_drop = 0, .distance = 0, .measure = star};
    if (c.case_id == 3 && c.on_boundary) {
        w.family = WitnessFamily::MassLeak;
        w.alpha = kLeakAlpha;
        const double heavy = std::max(m, 1 - m);
        const double cap = std::min(kInnerRadius, std::pow(0.5 * heavy, 1 / kLeakAlpha));
        auto energy = [&](double eta) {
            return interaction_energy(pot, leak_family_measure(m, eta, kLeakAlpha));
        };
        auto [eta, e] = line_minimize(energy, cap);
        w.parameter = eta;
        w.measure = leak_family_measure(m, eta, kLeakAlpha);
        w.energy_drop = base - interaction_energy(pot, w.measure);
    } else {
        const double right = split_second_derivative(p, 2.0, m, SplitSide::Right);
        const double left = split_second_derivative(p, 2.0, m, SplitSide::Left);
        const SplitSide side = right <= left ? SplitSide::Right : SplitSide::Left;
        w.family = side == SplitSide::Right ? WitnessFamily::SplitRight : WitnessFamily::SplitLeft;
        auto energy = [&](double x) {
            return interaction_energy(pot, split_family_measure(m, side, x));
        };
        auto [x, e] = line_minimize(energy, kInnerRadius);
        w.parameter = x;
        w.measure = split_family_measure(m, side, x);
        w.energy_drop = base - interaction_energy(pot, w.measure);
    }
    w.distance = d_inf(w.measure, star);
    if (!(w.energy_drop > 1e-12) || w.distance > kWitnessRadius) {
        throw NumericalError("saddle_witness: no energy drop found for p=" + std::to_string(p) +
                             ", q=" + std::to_string(q) + ", m=" + std::to_string(m) +
                             " (classification and numerics disagree)");
    }
    return w;
}

QuadraticMargin strict_min_margin(double p, double q, double m) {
    const Classification c = classify_verdict(p, q, m);
    if (c.verdict != Verdict::StrictLocalMin || c.case_id > 2) {
        throw DomainError("strict_min_margin applies to clauses 1-2 only");
    }
    const Potential pot(p, q);
    const double v0 = pot.second(0.0);
    const double v1 = pot.second(1.0);
    const double m0 = m;
    const double m1 = 1 - m;
    // a m_i^2 < b m0 m1  <=>  eps < (V''(1) m0 m1 + V''(0) m_i^2) / (2 m_i)
    const double tight = std::min((v1 * m0 * m1 + v0 * m0 * m0) / (2 * m0),
                                  (v1 * m0 * m1 + v0 * m1 * m1) / (2 * m1));
    if (!(tight > 0)) throw Inconclusive("strict_min_margin: no admissible epsilon");
    QuadraticMargin out{};
    out.epsilon = tight / 2;
    out.a = out.epsilon - v0 / 2;
    out.b = v1 / 2 - out.epsilon;
    out.margin0 = out.b * m0 * m1 - out.a * m0 * m0;
    out.margin1 = out.b * m0 * m1 - out.a * m1 * m1;
    if (!(out.margin0 > 0 && out.margin1 > 0 && out.b > out.a && out.a > 0)) {
        throw Inconclusive("strict_min_margin: inequalities fail at the chosen epsilon");
    }

    const auto sandwich_holds = [&](double r0) {
        for (int k = 0; k < 1000; ++k) {
            const double s = -2 * r0 + 4 * r0 * k / 999.0;
            if (pot.value(s) < -out.a * s * s) return false;
            const double x = 1 + s;
            const double d = pot.value(x) - pot.value(1.0) - out.b * s * s;
            if (d < -1e-15 * std::max(1.0, std::abs(pot.value(x)))) return false;
        }
        return true;
    };
    double r0 = 0.25;
    for (int h = 0; h < 60; ++h, r0 *= 0.5) {
        if (sandwich_holds(r0)) {
            out.r0 = r0;
            return out;
        }
    }
    throw Inconclusive("strict_min_margin: sandwich not verified at any radius");
}

}  // namespace mildrep
