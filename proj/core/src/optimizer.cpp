#include "gsgd/optimizer.hpp"

#include <cmath>
#include <limits>

#include "gsgd/diagnostics.hpp"

namespace gsgd {

std::string to_string(Method m) {
    switch (m) {
        case Method::heavy_ball: return "heavy_ball";
        case Method::signsgd: return "signsgd";
        case Method::lion: return "lion";
        case Method::normalized: return "normalized";
        case Method::clipped: return "clipped";
    }
    return "heavy_ball";
}

Method method_from_string(const std::string& s) {
    if (s == "heavy_ball") return Method::heavy_ball;
    if (s == "signsgd") return Method::signsgd;
    if (s == "lion") return Method::lion;
    if (s == "normalized") return Method::normalized;
    if (s == "clipped") return Method::clipped;
    throw std::invalid_argument("unknown method: " + s);
}

PhiChoice method_phi(const GsgdConfig& config) {
    switch (config.method) {
        case Method::heavy_ball: return PhiChoice::half_square();
        case Method::signsgd:
        case Method::lion: return PhiChoice::l1();
        case Method::normalized: return PhiChoice::l2();
        case Method::clipped: return PhiChoice::clip(config.clip_level);
    }
    return PhiChoice::half_square();
}

std::size_t sample_component(OptimizerState& state, std::size_t component_count) {
    if (component_count == 0) throw std::invalid_argument("sample_component: empty problem");
    return state.rng.uniform_index(component_count) + 1;
}

RealVector draw_noise(OptimizerState& state, const NoiseModel& model, std::size_t dimension) {
    if (model.kind == NoiseModel::Kind::none) return RealVector(dimension, 0.0);
    if (model.bound < 0.0) throw std::invalid_argument("draw_noise: bound must be >= 0");
    const double per_coord = model.bound / std::sqrt(static_cast<double>(dimension));
    RealVector xi(dimension);
    for (double& v : xi) v = state.rng.uniform(-per_coord, per_coord);
    return xi;
}

void momentum_average_inplace(RealVector& m, const RealVector& g, double theta) {
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] = (1.0 - theta) * m[i] + theta * g[i];
    }
}

void apply_framework_update(RealVector& x, RealVector& m, const RealVector& g, double eta,
                            double theta, const PhiChoice& phi, double alpha, TiePolicy tie,
                            Rng* rng) {
    require_same_dim(x, g, "apply_framework_update");
    momentum_average_inplace(m, g, theta);
    const RealVector p = phi_select(m, phi, tie, rng);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= eta * (p[i] + alpha * g[i]);
    }
}

void apply_update(Method method, const GsgdConfig& config, RealVector& x, RealVector& m,
                  const RealVector& g, double eta, double theta, double tau, Rng* rng) {
    switch (method) {
        case Method::heavy_ball:
            apply_framework_update(x, m, g, eta, theta, PhiChoice::half_square(), config.alpha,
                                   config.tie, rng);
            break;
        case Method::signsgd:
            apply_framework_update(x, m, g, eta, theta, PhiChoice::l1(), config.alpha, config.tie,
                                   rng);
            break;
        case Method::normalized:
            apply_framework_update(x, m, g, eta, theta, PhiChoice::l2(), config.alpha, config.tie,
                                   rng);
            break;
        case Method::clipped:
            apply_framework_update(x, m, g, eta, theta, PhiChoice::clip(config.clip_level),
                                   config.alpha, config.tie, rng);
            break;
        case Method::lion: {
            // direction from the tau-average of (m, g), momentum from the theta-average
            RealVector v = m;
            momentum_average_inplace(v, g, tau);
            const RealVector d = sign_select(v, config.tie, rng);
            for (std::size_t i = 0; i < x.size(); ++i) {
                x[i] -= eta * (d[i] + config.alpha * g[i]);
            }
            momentum_average_inplace(m, g, theta);
            break;
        }
    }
}

void step(const Problem& problem, OptimizerState& state, const GsgdConfig& config) {
    const RealVector x_before = state.x;
    const RealVector m_before = state.m;
    const std::size_t i = sample_component(state, problem.component_count()) - 1;
    RealVector g = problem.component_selection(i, state.x);
    if (config.noise.kind != NoiseModel::Kind::none) {
        const RealVector xi = draw_noise(state, config.noise, g.size());
        axpy_inplace(g, 1.0, xi);
    }
    const double eta = config.schedule.eta(state.k);
    const double theta = config.schedule.theta(state.k);
    const double tau = std::min(config.lion_tau_scale * theta, 1.0);
    apply_update(config.method, config, state.x, state.m, g, eta, theta, tau, &state.rng);
    ++state.k;
    if (!all_finite(state.x) || !all_finite(state.m) || norm_inf(state.x) > 1e12) {
        throw DivergenceError("iterate diverged at step " + std::to_string(state.k), x_before,
                              m_before, state.k - 1);
    }
}

RealVector initial_point(const GsgdConfig& config, std::size_t dimension, Rng& rng) {
    if (config.x0.has_value()) {
        if (config.x0->size() != dimension) {
            throw std::invalid_argument("initial_point: x0 dimension mismatch");
        }
        require_finite(*config.x0, "initial_point");
        return *config.x0;
    }
    RealVector x(dimension);
    for (double& v : x) v = rng.uniform(-config.init_scale, config.init_scale);
    return x;
}

namespace {

ProbeRow make_probe(const Problem& problem, const GsgdConfig& config, const RealVector& x,
                    const RealVector& m, std::size_t k, double delta) {
    ProbeRow probe;
    probe.k = k;
    const StationarityValue sv = stationarity_measure(problem, x);
    probe.stationarity = sv.value;
    probe.stationarity_upper_bound = sv.upper_bound;
    const double tau = config.schedule.regime == Regime::single ? config.schedule.tau : 1.0;
    probe.lyapunov = lyapunov_h(problem, x, m, method_phi(config), tau);
    probe.delta = delta;
    if (problem.has_hull_oracle()) {
        probe.momentum_gap = momentum_gap(problem, x, m, delta);
    } else {
        probe.momentum_gap = std::numeric_limits<double>::quiet_NaN();
    }
    return probe;
}

}  // namespace

RunRecord run(const Problem& problem, const GsgdConfig& config) {
    const std::size_t n = problem.dimension();
    OptimizerState state(RealVector{}, RealVector{}, config.seed);
    state.x = initial_point(config, n, state.rng);
    if (config.m0.has_value()) {
        if (config.m0->size() != n) throw std::invalid_argument("run: m0 dimension mismatch");
        require_finite(*config.m0, "run: m0");
        state.m = *config.m0;
    } else {
        state.m = RealVector(n, 0.0);
    }
    if (config.probe_period == 0) throw std::invalid_argument("run: probe_period must be >= 1");

    RunRecord record;
    record.rows.reserve(config.horizon + 1);

    const double m0_norm = norm(state.m);
    double g_sup = 0.0;             // sup_j ||g_j|| observed so far
    double step_magnitude = 0.0;    // running bound M_a on ||x_{k+1} - x_k|| / eta_k
    std::vector<double> etas;       // for the probe window sums
    etas.reserve(config.horizon);

    // delta_k = M_a * sum_{i = k-w}^{k} eta_i with w = ceil(sqrt(k))
    const auto probe_delta = [&](std::size_t k) {
        if (k == 0) return 0.0;
        const std::size_t w = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(k))));
        const std::size_t lo = k >= w ? k - w : 0;
        double s = config.schedule.eta(k);
        for (std::size_t i = lo; i < k; ++i) s += etas[i];
        return step_magnitude * s;
    };

    const auto log_row = [&](std::size_t k) {
        RunRow row;
        row.k = k;
        row.f = problem.value(state.x);
        row.m_norm = norm(state.m);
        row.eta = config.schedule.eta(k);
        row.theta = config.schedule.theta(k);
        record.rows.push_back(row);
    };

    for (std::size_t k = 0; k < config.horizon; ++k) {
        log_row(k);
        if (k % config.probe_period == 0) {
            record.probes.push_back(make_probe(problem, config, state.x, state.m, k, probe_delta(k)));
        }
        const RealVector x_before = state.x;
        try {
            const std::size_t i = sample_component(state, problem.component_count()) - 1;
            RealVector g = problem.component_selection(i, state.x);
            if (config.noise.kind != NoiseModel::Kind::none) {
                axpy_inplace(g, 1.0, draw_noise(state, config.noise, n));
            }
            const double g_norm = norm(g);
            const double eta = config.schedule.eta(k);
            const double theta = config.schedule.theta(k);
            const double tau = std::min(config.lion_tau_scale * theta, 1.0);
            const RealVector m_before = state.m;
            apply_update(config.method, config, state.x, state.m, g, eta, theta, tau, &state.rng);
            ++state.k;
            if (!all_finite(state.x) || !all_finite(state.m) || norm_inf(state.x) > 1e12) {
                throw DivergenceError("iterate diverged at step " + std::to_string(state.k),
                                      x_before, m_before, k);
            }
            g_sup = std::max(g_sup, g_norm);
            etas.push_back(eta);
            if (eta > 0.0) {
                step_magnitude = std::max(step_magnitude, distance(state.x, x_before) / eta);
            }
            record.momentum_bound_excess =
                std::max(record.momentum_bound_excess, norm(state.m) - std::max(m0_norm, g_sup));
        } catch (const DivergenceError& e) {
            record.diverged = true;
            record.terminal_x = e.last_x;
            record.terminal_m = e.last_m;
            record.completed_steps = k;
            return record;
        }
    }

    log_row(config.horizon);
    record.probes.push_back(make_probe(problem, config, state.x, state.m, config.horizon,
                                       probe_delta(config.horizon)));
    record.terminal_x = state.x;
    record.terminal_m = state.m;
    record.completed_steps = config.horizon;
    return record;
}

}  // namespace gsgd
