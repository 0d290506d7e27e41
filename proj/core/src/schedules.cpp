#include "gsgd/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace gsgd {

std::string to_string(Regime r) {
    switch (r) {
        case Regime::single: return "single";
        case Regime::two: return "two";
        case Regime::fixed: return "fixed";
    }
    return "single";
}

Regime regime_from_string(const std::string& s) {
    if (s == "single") return Regime::single;
    if (s == "two") return Regime::two;
    if (s == "fixed") return Regime::fixed;
    throw std::invalid_argument("unknown schedule regime: " + s);
}

std::string to_string(EtaRule r) {
    return r == EtaRule::power ? "power" : "loglog";
}

EtaRule eta_rule_from_string(const std::string& s) {
    if (s == "power") return EtaRule::power;
    if (s == "loglog") return EtaRule::loglog;
    throw std::invalid_argument("unknown eta rule: " + s);
}

double StepsizeSchedule::eta(std::size_t k) const {
    const double kk = static_cast<double>(k);
    double base = 0.0;
    switch (eta_rule) {
        case EtaRule::power:
            base = eta0 / std::pow(kk + 1.0, exponent);
            break;
        case EtaRule::loglog:
            base = eta0 / (std::log(kk + 2.0) * std::log(std::log(kk + 3.0)));
            break;
    }
    return scale_c * base;
}

double StepsizeSchedule::theta_raw(std::size_t k) const {
    switch (regime) {
        case Regime::single: return tau * eta(k);
        case Regime::two: return std::sqrt(eta(k) / std::log(static_cast<double>(k) + 2.0));
        case Regime::fixed: return theta0;
    }
    return theta0;
}

double StepsizeSchedule::theta(std::size_t k) const {
    return std::min(theta_raw(k), 1.0);
}

bool StepsizeSchedule::theta_clamps_within(std::size_t /*horizon*/) const {
    // eta rules are decreasing, so theta_raw is maximal at k = 0 for all regimes
    return theta_raw(0) > 1.0;
}

double lambda_acc(std::span<const double> seq, std::size_t i) {
    if (i > seq.size()) throw std::out_of_range("lambda_acc: index beyond sequence");
    double s = 0.0;
    for (std::size_t k = 0; k < i; ++k) s += seq[k];
    return s;
}

std::size_t Lambda_inv(std::span<const double> seq, double t) {
    if (t < 0.0) throw std::out_of_range("Lambda_inv: negative time");
    double acc = 0.0;
    std::size_t p = 0;
    while (p < seq.size() && acc + seq[p] <= t) {
        acc += seq[p];
        ++p;
    }
    return p;
}

IdentityCheck geometric_weight_identity(std::span<const double> thetas, std::size_t k, std::size_t l) {
    if (k >= thetas.size()) throw std::out_of_range("geometric_weight_identity: k beyond sequence");
    if (l > k) throw std::out_of_range("geometric_weight_identity: requires l <= k");

    const auto theta_at = [&](std::ptrdiff_t j) -> double {
        return j < 0 ? 1.0 : thetas[static_cast<std::size_t>(j)];
    };

    IdentityCheck out;

    // lhs: running product prod_{j=k-i}^{k} (1 - theta_j) extended one factor per term
    double lhs = thetas[k];
    double prod = 1.0;
    for (std::size_t i = 0; i <= l; ++i) {
        prod *= 1.0 - thetas[k - i];
        lhs += theta_at(static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(i) - 1) * prod;
    }
    out.lhs = lhs;

    // rhs: plain product over j = k-l-1 .. k
    double q = 1.0;
    for (std::ptrdiff_t j = static_cast<std::ptrdiff_t>(k) - static_cast<std::ptrdiff_t>(l) - 1;
         j <= static_cast<std::ptrdiff_t>(k); ++j) {
        q *= 1.0 - theta_at(j);
    }
    out.rhs = 1.0 - q;
    return out;
}

bool ScheduleValidation::all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

namespace {

std::string format_value(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

}  // namespace

ScheduleValidation validate(const StepsizeSchedule& s, std::size_t horizon) {
    if (horizon < 100) throw std::invalid_argument("validate: horizon must be >= 100");

    ScheduleValidation report;
    report.clamping_fired = s.theta_clamps_within(horizon);

    double lam = 0.0;
    for (std::size_t k = 0; k < horizon; ++k) lam += s.eta(k);
    report.lambda_eta_horizon = lam;

    // eta_k * log(k) on the tail [K/2, K]: max and per-sample trend slope
    constexpr std::size_t kSamples = 64;
    double max_el = 0.0;
    double first_el = 0.0, last_el = 0.0;
    for (std::size_t j = 0; j < kSamples; ++j) {
        const std::size_t k = horizon / 2 + (horizon / 2) * j / (kSamples - 1);
        const double el = s.eta(k) * std::log(static_cast<double>(std::max<std::size_t>(k, 2)));
        max_el = std::max(max_el, el);
        if (j == 0) first_el = el;
        if (j == kSamples - 1) last_el = el;
    }
    report.max_eta_log_tail = max_el;
    report.eta_log_trend_slope = (last_el - first_el) / static_cast<double>(kSamples - 1);
    const bool eta_log_decreasing = last_el < first_el;

    // theta/eta ratio classification at tail sample points
    const std::size_t kh = horizon / 2;
    const double r_half = s.theta(kh) / s.eta(kh);
    const double r_end = s.theta(horizon) / s.eta(horizon);
    const bool eta_constant = std::abs(s.eta(horizon) - s.eta(kh)) <= 1e-12 * s.eta(kh);
    if (std::abs(r_end - r_half) <= 1e-9 * std::max(1.0, std::abs(r_end))) {
        report.ratio_class = eta_constant ? "constant" : "to_tau";
        report.tau_hat = r_end;
    } else if (r_end > r_half) {
        report.ratio_class = "to_zero";  // eta/theta -> 0
        report.tau_hat = 0.0;
    } else {
        report.ratio_class = "constant";
        report.tau_hat = r_end;
    }
    report.theta_diminishes = s.theta(horizon) < s.theta(kh) - 1e-300;

    // Assumption checks
    {
        ScheduleValidation::Check c;
        c.name = "sum_eta_diverges";
        const bool whitelisted = (s.eta_rule == EtaRule::power && s.exponent <= 1.0) ||
                                 s.eta_rule == EtaRule::loglog;
        c.passed = whitelisted;
        c.note = whitelisted
                     ? "asymptotic - verified symbolically by rule kind; lambda_eta(K) = " +
                           format_value(report.lambda_eta_horizon)
                     : "rule not whitelisted for symbolic divergence";
        report.checks.push_back(c);
    }
    {
        ScheduleValidation::Check c;
        c.name = "eta_log_vanishes";
        c.passed = max_el < 0.1 && eta_log_decreasing;
        c.note = "max eta_k log(k) over tail = " + format_value(max_el) +
                 (eta_log_decreasing ? ", decreasing" : ", NOT decreasing");
        report.checks.push_back(c);
    }
    {
        ScheduleValidation::Check c;
        c.name = "timescale_ratio";
        switch (s.regime) {
            case Regime::single: {
                bool exact = true;
                for (std::size_t k : {std::size_t{0}, kh, horizon}) {
                    if (s.theta(k) != s.tau * s.eta(k)) exact = false;
                }
                c.passed = exact && report.ratio_class == "to_tau";
                c.note = "theta/eta = tau exactly; tau_hat = " + format_value(report.tau_hat);
                break;
            }
            case Regime::two: {
                const double g_half = s.eta(kh) / s.theta(kh);
                const double g_end = s.eta(horizon) / s.theta(horizon);
                c.passed = g_end < g_half;
                c.note = "eta/theta shrinking: " + format_value(g_half) + " -> " + format_value(g_end) +
                         "; theta/eta grows " + format_value(r_half) + " -> " + format_value(r_end);
                break;
            }
            case Regime::fixed: {
                c.passed = true;
                c.note = "theta does not diminish - released-solver baseline; eta/theta -> 0";
                break;
            }
        }
        report.checks.push_back(c);
    }
    if (report.clamping_fired) {
        report.checks.push_back({"theta_clamp", true, "theta_raw exceeded 1 and was clamped"});
    }
    return report;
}

}  // namespace gsgd
