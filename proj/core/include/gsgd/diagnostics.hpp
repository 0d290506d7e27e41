#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gsgd/problems.hpp"
#include "gsgd/selections.hpp"
#include "gsgd/vec.hpp"

namespace gsgd {

struct MinNormResult {
    RealVector point;
    double norm = 0.0;
};

/// Minimum-norm point of conv(vertices) by Wolfe's active-set method, to
/// duality gap <= tol. Returns an exact zero when a containment certificate is
/// found. Ties in the linear subproblem break to the lowest vertex index.
MinNormResult min_norm_in_hull(const HullDescription& hull, double tol = 1e-9);

/// Minimum-norm point of conv(union of offset+segment structures). Same Wolfe
/// engine with the linear subproblem solved per segment, so zonotopes with
/// 2^k vertices never need enumeration.
MinNormResult min_norm_over_structures(std::span<const HullStructure> structures, double tol = 1e-9);

/// Euclidean distance from p to conv(union of structures).
double distance_to_structures(const RealVector& p, std::span<const HullStructure> structures,
                              double tol = 1e-9);

struct StationarityValue {
    double value = 0.0;
    /// True when the problem exposes no hull oracle and the value is the best
    /// of `samples` sampled selection norms (an upper bound only).
    bool upper_bound = false;
};

/// dist(0, conv(D_f(x))). Uses the hull oracle when available (falling back
/// to the implicit segment form beyond the vertex-enumeration cap); otherwise
/// reports the sampled upper bound over a grid of the free kink parameter.
StationarityValue stationarity_measure(const Problem& problem, const RealVector& x,
                                       double tol = 1e-9, std::size_t samples = 64);

/// h(x, m) = f(x) + phi(m) / tau.
double lyapunov_h(const Problem& problem, const RealVector& x, const RealVector& m,
                  const PhiChoice& phi, double tau);

/// dist(m, approx conv(D_f^delta(x))), floored at 0. The delta-fattened set is
/// under-approximated by the union of hulls at x and at the 2n axis
/// perturbations x +- delta e_i, with the distance reduced by delta.
double momentum_gap(const Problem& problem, const RealVector& x, const RealVector& m,
                    double delta, double tol = 1e-9);

/// Piecewise-linear continuous-time path through the iterates with segment
/// lengths eta_i; x(lambda(i)) = x_i bit-exactly.
class InterpolatedPath {
public:
    InterpolatedPath(std::vector<RealVector> points, std::vector<double> etas);

    /// Valid for t in [0, total_time()]; throws std::out_of_range otherwise.
    RealVector at(double t) const;
    double total_time() const { return knots_.back(); }
    const std::vector<double>& knots() const { return knots_; }

private:
    std::vector<RealVector> points_;
    std::vector<double> etas_;
    std::vector<double> knots_;  // lambda(0) .. lambda(len-1)
};

/// Empirical shadowing distance between the interpolated iterate path and the
/// flow dx/dt = -(1+alpha) * selection(x): from each of `probes` start times in
/// the second half of the run, integrate explicit Euler with step fine_step
/// over [t, t+window] and return the largest deviation seen.
double di_shadow_distance(const Problem& problem, const std::vector<RealVector>& points,
                          const std::vector<double>& etas, double window, double fine_step,
                          double alpha, std::size_t probes = 5);

}  // namespace gsgd
