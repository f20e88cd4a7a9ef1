#pragma once

#include <vector>

#include "mildrep/measure.hpp"

namespace mildrep {

struct TransportEntry {
    double source;
    double target;
    double mass;
};

/// A transport plan between two discrete measures, as a list of
/// (source, target, mass) cells with positive mass.
struct Coupling {
    std::vector<TransportEntry> entries;
};

/// The quantile (monotone) coupling: CDF breakpoints of both measures are
/// merged and the i-th quantile segment of mu is paired with the i-th of nu.
/// Breakpoints closer than 1e-14 are identified. Non-crossing by
/// construction and optimal in 1D for convex and sup costs.
Coupling monotone_coupling(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// Wasserstein distance d_lambda for 1 <= lambda < inf.
double d_lambda(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda);

/// d_inf: the largest displacement of the monotone coupling.
double d_inf(const DiscreteMeasure& mu, const DiscreteMeasure& nu);

/// sum of mass * |x - y|^lambda over a coupling
double coupling_cost(const Coupling& plan, double lambda);

/// Exact optimum of the discrete transport linear program with cost
/// |x - y|^lambda (i.e. d_lambda^lambda), solved by a dense two-phase simplex
/// that knows nothing about the ordering of the line. Combined support size
/// is limited to 12 atoms.
double lp_oracle(const DiscreteMeasure& mu, const DiscreteMeasure& nu, double lambda);

namespace detail {

/// min c.x s.t. A x = b, x >= 0, with b >= 0. Bland's rule, two phases.
/// Row-major A with rows.size() == b.size(). Throws NumericalError when
/// infeasible or unbounded.
double simplex_minimize(const std::vector<std::vector<double>>& A, const std::vector<double>& b,
                        const std::vector<double>& c);

}  // namespace detail
}  // namespace mildrep
