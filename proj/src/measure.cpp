#include "mildrep/measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "mildrep/errors.hpp"
#include "mildrep/numeric.hpp"

namespace mildrep {

DiscreteMeasure DiscreteMeasure::build(std::vector<Atom> atoms, bool normalize) {
    std::erase_if(atoms, [](const Atom& a) { return a.mass == 0.0; });
    if (atoms.empty()) throw DomainError("measure has no mass");
    std::sort(atoms.begin(), atoms.end());

    std::vector<Atom> merged;
    merged.reserve(atoms.size());
    for (const Atom& a : atoms) {
        if (!merged.empty() && a.position - merged.back().position <= kCoalesceTolerance) {
            Atom& b = merged.back();
            const double total = b.mass + a.mass;
            b.position = (b.position * b.mass + a.position * a.mass) / total;
            b.mass = total;
        } else {
            merged.push_back(a);
        }
    }
    if (normalize) {
        CompensatedSum total;
        for (const Atom& a : merged) total += a.mass;
        const double t = total.value();
        if (!(t > 0) || !std::isfinite(t)) throw DomainError("measure total mass must be positive");
        // Already-normalized input is kept bit-for-bit so serialization round-trips.
        if (std::abs(t - 1.0) > 4 * std::numeric_limits<double>::epsilon()) {
            for (Atom& a : merged) a.mass /= t;
        }
    }
    return DiscreteMeasure(std::move(merged));
}

DiscreteMeasure DiscreteMeasure::from_atoms(std::span<const Atom> atoms) {
    if (atoms.empty()) throw DomainError("measure needs at least one atom");
    for (const Atom& a : atoms) {
        if (!std::isfinite(a.position) || !std::isfinite(a.mass)) {
            throw DomainError("measure atoms must be finite");
        }
        if (a.mass < 0) throw DomainError("measure masses must be nonnegative");
    }
    return build({atoms.begin(), atoms.end()}, true);
}

DiscreteMeasure DiscreteMeasure::dirac(double x) {
    const Atom a{x, 1.0};
    return from_atoms(std::span(&a, 1));
}

DiscreteMeasure DiscreteMeasure::two_dirac(double m) {
    if (!(m > 0 && m < 1)) throw DomainError("two-Dirac mass must lie in (0, 1)");
    return DiscreteMeasure({{0.0, m}, {1.0, 1.0 - m}});
}

std::vector<double> DiscreteMeasure::positions() const {
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (const Atom& a : atoms_) out.push_back(a.position);
    return out;
}

std::vector<double> DiscreteMeasure::masses() const {
    std::vector<double> out;
    out.reserve(atoms_.size());
    for (const Atom& a : atoms_) out.push_back(a.mass);
    return out;
}

double DiscreteMeasure::total_mass() const {
    CompensatedSum s;
    for (const Atom& a : atoms_) s += a.mass;
    return s.value();
}

double DiscreteMeasure::mean() const {
    CompensatedSum s;
    for (const Atom& a : atoms_) s += a.mass * a.position;
    return s.value() / total_mass();
}

double DiscreteMeasure::quantile(double u) const {
    if (!(u > 0 && u < 1)) throw DomainError("quantile level must lie in (0, 1)");
    CompensatedSum cdf;
    for (const Atom& a : atoms_) {
        cdf += a.mass;
        if (cdf.value() >= u) return a.position;
    }
    return atoms_.back().position;
}

DiscreteMeasure DiscreteMeasure::translated(double shift) const {
    std::vector<Atom> out = atoms_;
    for (Atom& a : out) a.position += shift;
    return DiscreteMeasure(std::move(out));
}

DiscreteMeasure DiscreteMeasure::reflected() const {
    std::vector<Atom> out(atoms_.rbegin(), atoms_.rend());
    for (Atom& a : out) a.position = -a.position;
    return DiscreteMeasure(std::move(out));
}

DiscreteMeasure DiscreteMeasure::with_positions(std::span<const double> positions) const {
    if (positions.size() != atoms_.size()) {
        throw DomainError("with_positions: expected " + std::to_string(atoms_.size()) +
                          " positions, got " + std::to_string(positions.size()));
    }
    std::vector<Atom> out(atoms_.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!std::isfinite(positions[i])) throw NumericalError("non-finite atom position");
        out[i] = {positions[i], atoms_[i].mass};
    }
    return build(std::move(out), false);
}

namespace {

// Lexicographic (position, mass) comparison where entries within tol count
// as equal. Returns <0, 0, >0.
int fuzzy_compare(std::span<const Atom> a, std::span<const Atom> b, double tol) {
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (std::abs(a[i].position - b[i].position) > tol) {
            return a[i].position < b[i].position ? -1 : 1;
        }
        if (std::abs(a[i].mass - b[i].mass) > tol) return a[i].mass < b[i].mass ? -1 : 1;
    }
    return (a.size() > b.size()) - (a.size() < b.size());
}

}  // namespace

DiscreteMeasure canonicalize(const DiscreteMeasure& mu) {
    const double left = mu[0].position;
    DiscreteMeasure shifted = left == 0.0 ? mu : mu.translated(-left);
    const double diam = shifted.diameter();
    DiscreteMeasure mirror = shifted.reflected().translated(diam);
    // The mirror's leftmost atom is diam - diam, exactly 0.
    if (fuzzy_compare(mirror.atoms(), shifted.atoms(), DiscreteMeasure::kCoalesceTolerance) < 0) {
        return mirror;
    }
    return shifted;
}

DiscreteMeasure merge_atoms(const DiscreteMeasure& mu, double tol) {
    if (!(tol >= 0)) throw DomainError("merge tolerance must be nonnegative");
    const auto atoms = mu.atoms();
    std::vector<Atom> out;
    out.reserve(atoms.size());
    std::size_t i = 0;
    while (i < atoms.size()) {
        std::size_t j = i + 1;
        while (j < atoms.size() && atoms[j].position - atoms[j - 1].position <= tol) ++j;
        if (j == i + 1) {
            out.push_back(atoms[i]);
        } else {
            CompensatedSum mass;
            CompensatedSum moment;
            for (std::size_t k = i; k < j; ++k) {
                mass += atoms[k].mass;
                moment += atoms[k].mass * atoms[k].position;
            }
            out.push_back({moment.value() / mass.value(), mass.value()});
        }
        i = j;
    }
    return DiscreteMeasure(std::move(out));
}

double atomwise_distance(const DiscreteMeasure& a, const DiscreteMeasure& b) {
    if (a.size() != b.size()) return std::numeric_limits<double>::infinity();
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        d = std::max({d, std::abs(a[i].position - b[i].position), std::abs(a[i].mass - b[i].mass)});
    }
    return d;
}

}  // namespace mildrep
