#include "mildrep/moment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "mildrep/errors.hpp"
#include "mildrep/numeric.hpp"
#include "mildrep/parallel.hpp"

namespace mildrep {
namespace {

double ipow(double x, int k) {
    double r = 1.0;
    for (int i = 0; i < k; ++i) r *= x;
    return r;
}

void check_order(int n) {
    if (n < 1 || n > 4) throw DomainError("moment order n must lie in 1..4");
}

double pair_term(const MomentDistribution& d, int exponent) {
    CompensatedSum s;
    const std::size_t g = d.positions.size();
    for (std::size_t i = 0; i < g; ++i) {
        for (std::size_t j = i + 1; j < g; ++j) {
            s += 2 * d.weights[i] * d.weights[j] * ipow(std::abs(d.positions[i] - d.positions[j]), exponent);
        }
    }
    return s.value();
}

// Constraint rows: 1, x, x^3, ..., x^(2n-1).
Eigen::MatrixXd constraint_matrix(const std::vector<double>& x, int n) {
    Eigen::MatrixXd A(n + 1, static_cast<Eigen::Index>(x.size()));
    for (std::size_t k = 0; k < x.size(); ++k) {
        A(0, k) = 1.0;
        for (int j = 1; j <= n; ++j) A(j, k) = ipow(x[k], 2 * j - 1);
    }
    return A;
}

}  // namespace

void validate(const MomentDistribution& d, double tol) {
    check_order(d.n);
    if (d.positions.size() != d.weights.size() || d.positions.empty()) {
        throw DomainError("moment distribution needs matching, nonempty positions and weights");
    }
    CompensatedSum total;
    for (std::size_t i = 0; i < d.weights.size(); ++i) {
        if (!(d.weights[i] >= 0)) throw DomainError("moment distribution weights must be >= 0");
        if (!(std::abs(d.positions[i]) <= d.c * (1 + 1e-14))) {
            throw DomainError("moment distribution atom outside [-c, c]");
        }
        total += d.weights[i];
    }
    if (std::abs(total.value() - 1) > 1e-12) throw DomainError("moment distribution weights must sum to 1");
    for (int j = 1; j <= d.n; ++j) {
        const double mj = moment(d, 2 * j - 1);
        if (std::abs(mj) > tol) {
            throw DomainError("odd moment E[X^" + std::to_string(2 * j - 1) + "] = " +
                              std::to_string(mj) + " does not vanish");
        }
    }
}

double moment(const MomentDistribution& d, int k) {
    CompensatedSum s;
    for (std::size_t i = 0; i < d.positions.size(); ++i) s += d.weights[i] * ipow(d.positions[i], k);
    return s.value();
}

double support_bound(int n, double M) {
    check_order(n);
    if (!(M > 0)) throw DomainError("M must be positive");
    return std::pow((2.0 * n - 1) / (3 * M), 1.0 / (2 * n - 1));
}

double lhs_value(const MomentDistribution& d, int n, double M) {
    MomentDistribution checked = d;
    checked.n = n;
    validate(checked);
    const double even = moment(d, 2 * n);
    return pair_term(d, 2 * n + 1) - 2 * moment(d, 2 * n + 1) - M * even * even;
}

double modified_lhs(const MomentDistribution& d, int n, double M, SharpnessVariant v) {
    const double cross = pair_term(d, 2 * n + 1);
    const double odd = moment(d, 2 * n + 1);
    if (v.kind == SharpnessVariant::Kind::ReplaceC) {
        const double even = moment(d, 2 * n);
        return cross - v.C * odd - M * even * even;
    }
    return cross - 2 * odd - M * moment(d, 4 * n);
}

MomentDistribution sample_constrained(int n, double c, int grid_size, std::uint64_t seed) {
    check_order(n);
    if (!(c > 0) || !std::isfinite(c)) throw DomainError("support bound c must be positive");
    if (grid_size < 2 * n + 2) throw DomainError("grid_size must be at least 2n + 2");

    const auto g = static_cast<std::size_t>(grid_size);
    MomentDistribution d;
    d.n = n;
    d.c = c;
    d.positions.resize(g);
    // Integer numerators keep the grid exactly antisymmetric.
    for (std::size_t k = 0; k < g; ++k) {
        d.positions[k] = c * (2.0 * static_cast<double>(k) - (grid_size - 1)) / (grid_size - 1);
    }
    const Eigen::MatrixXd A = constraint_matrix(d.positions, n);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
    const auto rank = svd.rank();
    const Eigen::MatrixXd null = svd.matrixV().rightCols(static_cast<Eigen::Index>(g) - rank);

    Eigen::VectorXd w = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(g), 1.0 / static_cast<double>(g));
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5bd1e995u};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const std::size_t chain = 50 * g;
    for (std::size_t step = 0; step < chain; ++step) {
        Eigen::VectorXd z(null.cols());
        for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = normal(rng);
        Eigen::VectorXd dir = null * z;
        dir.normalize();
        double t_lo = -std::numeric_limits<double>::infinity();
        double t_hi = std::numeric_limits<double>::infinity();
        for (Eigen::Index k = 0; k < dir.size(); ++k) {
            if (dir(k) > 1e-15) t_lo = std::max(t_lo, -w(k) / dir(k));
            if (dir(k) < -1e-15) t_hi = std::min(t_hi, -w(k) / dir(k));
        }
        if (!(t_hi > t_lo)) continue;
        w += (t_lo + (t_hi - t_lo) * unit(rng)) * dir;
        for (Eigen::Index k = 0; k < w.size(); ++k) w(k) = std::max(0.0, w(k));
    }
    // Remove accumulated drift off the affine constraint set.
    Eigen::VectorXd target = Eigen::VectorXd::Zero(n + 1);
    target(0) = 1.0;
    const Eigen::VectorXd resid = A * w - target;
    w -= A.transpose() * (A * A.transpose()).ldlt().solve(resid);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        if (w(k) < 0) {
            if (w(k) < -1e-12) throw NumericalError("hit-and-run left the weight polytope");
            w(k) = 0;
        }
    }
    d.weights.assign(w.data(), w.data() + w.size());
    validate(d, 1e-12);
    return d;
}

BatchReport verify_batch(int n, double M, std::size_t trials, std::uint64_t seed, int grid_size,
                         unsigned threads) {
    if (trials < 1) throw DomainError("verify_batch needs at least one trial");
    BatchReport rep;
    rep.c = support_bound(n, M);
    rep.trials = trials;
    std::vector<double> values(trials);
    std::vector<std::optional<MomentDistribution>> samples(trials);
    parallel_for(trials, threads, [&](std::size_t k) {
        const std::uint64_t stream = seed * 0x9E3779B97F4A7C15ull + k;
        auto d = sample_constrained(n, rep.c, grid_size, stream);
        values[k] = lhs_value(d, n, M);
        samples[k] = std::move(d);
    });
    std::size_t worst = 0;
    for (std::size_t k = 0; k < trials; ++k) {
        if (values[k] < -1e-10) ++rep.violations;
        if (values[k] < values[worst]) worst = k;
    }
    rep.min_lhs = values[worst];
    rep.worst = std::move(*samples[worst]);
    return rep;
}

Counterexample sharpness_counterexample(SharpnessVariant variant, int n, double M) {
    if (n != 1) throw DomainError("sharpness counterexamples are only checked for n = 1");
    if (!(M > 0)) throw DomainError("M must be positive");
    if (variant.kind == SharpnessVariant::Kind::ReplaceC && !(variant.C > 2)) {
        throw DomainError("ReplaceC needs C > 2; C = 2 is the inequality itself");
    }
    const double c = 1.0 / (3 * M);
    std::optional<Counterexample> best;
    constexpr int kGrid = 20000;
    for (int k = 1; k < kGrid; ++k) {
        const double t = 0.5 * k / kGrid;
        MomentDistribution d;
        d.n = 1;
        d.c = c;
        d.positions = {c, -t * c / (1 - t)};
        d.weights = {t, 1 - t};
        const double v = modified_lhs(d, n, M, variant);
        if (!best || v < best->value) best = Counterexample{d, v, t};
    }
    if (!best || !(best->value < -1e-12)) {
        throw NumericalError("sharpness_counterexample: no negative value on the t-grid");
    }
    return *best;
}

}  // namespace mildrep
