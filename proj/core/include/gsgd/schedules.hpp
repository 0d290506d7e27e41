#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace gsgd {

/// Timescale relation between the momentum stepsize theta_k and the variable
/// stepsize eta_k.
enum class Regime {
    single,  ///< theta_k = tau * eta_k (exact ratio)
    two,     ///< theta_k = sqrt(eta_k / log(k+2))
    fixed,   ///< theta_k = theta0 (released-solver baseline)
};

enum class EtaRule {
    power,   ///< eta0 / (k+1)^p, p in (0, 1]
    loglog,  ///< eta0 / (log(k+2) * log(log(k+3))), near-constant
};

std::string to_string(Regime r);
Regime regime_from_string(const std::string& s);
std::string to_string(EtaRule r);
EtaRule eta_rule_from_string(const std::string& s);

/// Paired stepsize generators. `scale_c` multiplies the eta sequence; theta is
/// derived from the scaled eta per regime (so single-timescale keeps
/// theta/eta = tau exactly for every k and every c), except the fixed regime
/// where theta0 is the baseline constant and is left unscaled.
struct StepsizeSchedule {
    Regime regime = Regime::single;
    double tau = 1.0;     // single
    double theta0 = 0.9;  // fixed
    EtaRule eta_rule = EtaRule::power;
    double eta0 = 0.1;
    double exponent = 0.5;  // power rule p
    double scale_c = 1.0;

    double eta(std::size_t k) const;
    /// theta_raw clamped to <= 1 so that 1 - theta_k >= 0 in the momentum average.
    double theta(std::size_t k) const;
    double theta_raw(std::size_t k) const;
    bool theta_clamps_within(std::size_t horizon) const;

    bool operator==(const StepsizeSchedule&) const = default;
};

/// lambda(0) = 0, lambda(i) = sum of the first i entries.
double lambda_acc(std::span<const double> seq, std::size_t i);

/// The unique p with lambda(p) <= t < lambda(p+1), capped at seq.size().
/// Accumulates in the same order as lambda_acc so that Lambda_inv(lambda(p)) = p.
std::size_t Lambda_inv(std::span<const double> seq, double t);

struct IdentityCheck {
    double lhs = 0.0;
    double rhs = 0.0;
};

/// Both sides of the geometric-weight identity
///   theta_k + sum_{i=0}^{l} theta_{k-i-1} prod_{j=k-i}^{k} (1-theta_j)
///     = 1 - prod_{j=k-l-1}^{k} (1-theta_j),
/// computed by separate direct loops. Requires l <= k < thetas.size();
/// the boundary index -1 is taken as theta_{-1} = 1, which keeps the identity
/// exact and covers the l = k case.
IdentityCheck geometric_weight_identity(std::span<const double> thetas, std::size_t k, std::size_t l);

struct ScheduleValidation {
    struct Check {
        std::string name;
        bool passed = false;
        std::string note;
    };

    double lambda_eta_horizon = 0.0;   // partial sum of eta up to the horizon
    double max_eta_log_tail = 0.0;     // max of eta_k * log(k) over [K/2, K]
    double eta_log_trend_slope = 0.0;  // per-sample slope of eta_k * log(k) on the tail
    std::string ratio_class;           // "to_tau" | "to_zero" | "constant"
    double tau_hat = 0.0;              // ratio estimate when ratio_class == "to_tau"
    bool theta_diminishes = false;
    bool clamping_fired = false;
    std::vector<Check> checks;

    bool all_passed() const;
};

/// Finite-horizon diagnostics for the stepsize assumptions: divergence of
/// sum(eta) is reported symbolically by rule kind, eta_k log(k) -> 0 as a tail
/// trend, and the theta/eta ratio is classified by regime.
ScheduleValidation validate(const StepsizeSchedule& s, std::size_t horizon);

}  // namespace gsgd
