#pragma once

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsgd/vec.hpp"

namespace gsgd {

/// Convex set given by the finite list of its extreme points.
struct HullDescription {
    std::vector<RealVector> vertices;
    std::size_t dimension = 0;
};

/// Convex set given as offset + Minkowski sum of centered segments
/// [-g_i, g_i]; the explicit vertex list is the 2^k sign choices. This is
/// the natural form of conv(D_f(x)) for piecewise-linear finite sums and lets
/// min-norm searches avoid enumerating vertices.
struct HullStructure {
    RealVector offset;
    std::vector<RealVector> generators;

    std::size_t kink_count() const { return generators.size(); }
};

/// Side limit taken by selection oracles exactly on a kink.
enum class KinkSide { plus, minus };

std::string to_string(KinkSide side);
KinkSide kink_side_from_string(const std::string& s);

class HullUnavailableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class TooManyKinksError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Maximum kinked components for explicit hull vertex enumeration (2^12 vertices).
inline constexpr std::size_t kMaxHullKinks = 12;

/// Finite-sum problem f(x) = (1/N) sum_i f_i(x) with per-component value and
/// selection oracles. Oracles are pure after construction.
class Problem {
public:
    virtual ~Problem() = default;

    virtual std::size_t component_count() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual double component_value(std::size_t i, const RealVector& x) const = 0;
    virtual RealVector component_selection(std::size_t i, const RealVector& x) const = 0;

    virtual bool has_hull_oracle() const { return false; }
    /// Structural form of conv(D_f(x)); throws HullUnavailableError by default.
    virtual HullStructure hull_structure(const RealVector& x) const;

    /// Selection with the free kink parameter overridden (networks: ReLU'(0));
    /// used by sampled stationarity bounds. Defaults to the plain selection.
    virtual RealVector selection_with_parameter(const RealVector& x, double /*t*/) const {
        return selection(x);
    }

    /// f(x): average of the component values.
    double value(const RealVector& x) const;
    /// One element of D_f(x): average of the component selections.
    RealVector selection(const RealVector& x) const;
    /// Explicit vertex enumeration of conv(D_f(x)); throws TooManyKinksError
    /// when more than kMaxHullKinks components are kinked.
    HullDescription hull_at(const RealVector& x) const;
};

using Matrix = std::vector<RealVector>;

/// g(u, v) = |2u + v| + |u + 10|; a single-component 2-d problem whose only
/// Clarke stationary point is (-10, 20). kink_tol widens hull kink detection
/// to |t| <= kink_tol on each absolute-value argument (selections always use
/// the exact side limit).
std::unique_ptr<Problem> make_counterexample(KinkSide side = KinkSide::plus, double kink_tol = 0.0);

/// f_i(x) = |<a_i, x> - b_i|.
std::unique_ptr<Problem> make_l1_regression(Matrix a, RealVector b,
                                            KinkSide side = KinkSide::plus,
                                            double kink_tol = 0.0);

struct SyntheticRecipe {
    std::size_t rows = 20;
    std::size_t cols = 5;
    std::uint64_t data_seed = 1;
    double noise_std = 0.0;

    bool operator==(const SyntheticRecipe&) const = default;
};

struct SyntheticData {
    Matrix a;
    RealVector b;
    RealVector planted;  // the planted model x*
};

/// Rows from a unit normal, labels from a planted model plus optional noise.
SyntheticData generate_synthetic(const SyntheticRecipe& recipe);

enum class LossKind { l1, half_square };

std::string to_string(LossKind loss);
LossKind loss_kind_from_string(const std::string& s);

/// One-hidden-layer ReLU network, x packs [W1 row-major, b1, w2, b2].
/// f_i(x) = loss(net(a_i; x) - b_i); selections come from reverse-mode
/// differentiation with ReLU'(0) := c_relu. No hull oracle.
std::unique_ptr<Problem> make_relu_net(std::size_t n_in, std::size_t n_hidden,
                                       Matrix inputs, RealVector labels,
                                       LossKind loss, double c_relu);

/// Packed weight-vector length for make_relu_net.
std::size_t relu_net_dimension(std::size_t n_in, std::size_t n_hidden);

}  // namespace gsgd
