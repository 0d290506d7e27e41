#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gsgd/problems.hpp"
#include "gsgd/rng.hpp"
#include "gsgd/schedules.hpp"
#include "gsgd/selections.hpp"
#include "gsgd/vec.hpp"

namespace gsgd {

enum class Method { heavy_ball, signsgd, lion, normalized, clipped };

std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct NoiseModel {
    enum class Kind { none, uniform };
    Kind kind = Kind::none;
    double bound = 0.0;  // M_xi; each coordinate iid uniform on [-M/sqrt(n), M/sqrt(n)]

    bool operator==(const NoiseModel&) const = default;
};

struct GsgdConfig {
    Method method = Method::heavy_ball;
    double alpha = 0.0;           // Nesterov term weight in the x-update
    double clip_level = 1.0;      // clipped only
    double lion_tau_scale = 1.0;  // tau_k = scale * theta_k, clamped to <= 1
    TiePolicy tie = TiePolicy::zero;
    StepsizeSchedule schedule;
    NoiseModel noise;
    std::uint64_t seed = 0;
    std::size_t horizon = 0;
    std::size_t probe_period = 100;
    std::optional<RealVector> x0;  // default: seeded uniform in [-init_scale, init_scale]^n
    std::optional<RealVector> m0;  // default: zeros
    double init_scale = 1.0;

    bool operator==(const GsgdConfig&) const = default;
};

/// The auxiliary potential realized by a method's x-update.
PhiChoice method_phi(const GsgdConfig& config);

struct OptimizerState {
    RealVector x;
    RealVector m;
    std::size_t k = 0;
    Rng rng;

    OptimizerState(RealVector x0, RealVector m0, std::uint64_t seed)
        : x(std::move(x0)), m(std::move(m0)), rng(seed) {}
};

class DivergenceError : public std::runtime_error {
public:
    DivergenceError(std::string msg, RealVector last_x, RealVector last_m, std::size_t at_step)
        : std::runtime_error(std::move(msg)),
          last_x(std::move(last_x)),
          last_m(std::move(last_m)),
          step(at_step) {}

    RealVector last_x;
    RealVector last_m;
    std::size_t step;
};

struct RunRow {
    std::size_t k = 0;
    double f = 0.0;
    double m_norm = 0.0;
    double eta = 0.0;
    double theta = 0.0;
};

struct ProbeRow {
    std::size_t k = 0;
    double stationarity = 0.0;
    bool stationarity_upper_bound = false;
    double lyapunov = 0.0;
    double momentum_gap = 0.0;  // NaN when the problem has no hull oracle
    double delta = 0.0;
};

struct RunRecord {
    std::string config_echo;       // canonical config serialization (set by the cli layer)
    std::vector<RunRow> rows;      // one per k = 0..completed_steps
    std::vector<ProbeRow> probes;  // at k % probe_period == 0 and at the final k
    RealVector terminal_x;
    RealVector terminal_m;
    std::size_t completed_steps = 0;
    bool diverged = false;
    double momentum_bound_excess = 0.0;  // max of ||m_k|| - max(||m_0||, sup_j ||g_j||)
};

/// Uniform component index in [1..N] from the run RNG; advances the stream.
std::size_t sample_component(OptimizerState& state, std::size_t component_count);

/// Noise draw: zero vector for Kind::none, iid uniform coordinates with
/// ||xi|| <= bound for Kind::uniform.
RealVector draw_noise(OptimizerState& state, const NoiseModel& model, std::size_t dimension);

/// m <- (1 - theta) m + theta g.
void momentum_average_inplace(RealVector& m, const RealVector& g, double theta);

/// One update of the generic framework: m' = (1-theta) m + theta g,
/// x' = x - eta (phi_select(m') + alpha g).
void apply_framework_update(RealVector& x, RealVector& m, const RealVector& g, double eta,
                            double theta, const PhiChoice& phi, double alpha, TiePolicy tie,
                            Rng* rng = nullptr);

/// One method step (Lion also takes tau for its direction average). Raises
/// DivergenceError when the iterate leaves the finite box ||x||_inf <= 1e12.
void apply_update(Method method, const GsgdConfig& config, RealVector& x, RealVector& m,
                  const RealVector& g, double eta, double theta, double tau, Rng* rng = nullptr);

/// One full stochastic step: sample i_k, draw noise, method update.
void step(const Problem& problem, OptimizerState& state, const GsgdConfig& config);

/// Runs `horizon` steps with per-iteration logging and periodic diagnostics
/// probes. Deterministic given (config, seed). Divergence aborts the loop and
/// flags the partial record.
RunRecord run(const Problem& problem, const GsgdConfig& config);

/// Initial iterate: config.x0 when set, otherwise seeded uniform coordinates
/// in [-init_scale, init_scale] drawn from `rng`.
RealVector initial_point(const GsgdConfig& config, std::size_t dimension, Rng& rng);

}  // namespace gsgd
