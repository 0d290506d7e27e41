#pragma once

#include <string>

#include "gsgd/rng.hpp"
#include "gsgd/vec.hpp"

namespace gsgd {

/// How a selection oracle resolves coordinates where the underlying set-valued
/// map is not a singleton. Selections are single-valued functions of
/// (input, policy, seed); the set-valuedness lives in the policy space.
enum class TiePolicy {
    zero,           ///< pick 0 (matches released signSGD implementations)
    positive,       ///< pick +1
    diagonal,       ///< all tied coordinates share the common value +1
    seeded_random,  ///< uniform in [-1, 1] from the run RNG
};

std::string to_string(TiePolicy tie);
TiePolicy tie_policy_from_string(const std::string& s);

/// Element of sign(m): -1 / +1 off zero, tie policy at zero coordinates.
/// `rng` is required only for TiePolicy::seeded_random.
RealVector sign_select(const RealVector& m, TiePolicy tie, Rng* rng = nullptr);

/// Element of regu(m): m / ||m|| for m != 0, a point of the unit ball at 0.
RealVector regu_select(const RealVector& m, TiePolicy tie, Rng* rng = nullptr);

/// Coordinate-wise clamp to [-clip_level, clip_level]; single-valued.
/// Throws std::invalid_argument when clip_level <= 0.
RealVector clip_select(const RealVector& m, double clip_level);

enum class PhiKind { half_square, l1, l2, clip };

/// The auxiliary potential that characterizes the x-update direction.
struct PhiChoice {
    PhiKind kind = PhiKind::half_square;
    double clip_level = 1.0;  // clip only

    static PhiChoice half_square() { return {PhiKind::half_square, 0.0}; }
    static PhiChoice l1() { return {PhiKind::l1, 0.0}; }
    static PhiChoice l2() { return {PhiKind::l2, 0.0}; }
    static PhiChoice clip(double level);
};

/// phi(m): half-square -> ||m||^2 / 2, l1 -> ||m||_1, l2 -> ||m||,
/// clip -> sum of the per-coordinate Huber-like potential (quadratic inside
/// [-C, C], affine in |x| outside).
double phi_value(const RealVector& m, const PhiChoice& phi);

/// One element of the subdifferential-like map of phi at m.
RealVector phi_select(const RealVector& m, const PhiChoice& phi, TiePolicy tie, Rng* rng = nullptr);

}  // namespace gsgd
