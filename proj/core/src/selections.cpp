#include "gsgd/selections.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gsgd {

std::string to_string(TiePolicy tie) {
    switch (tie) {
        case TiePolicy::zero: return "zero";
        case TiePolicy::positive: return "positive";
        case TiePolicy::diagonal: return "diagonal";
        case TiePolicy::seeded_random: return "seeded_random";
    }
    return "zero";
}

TiePolicy tie_policy_from_string(const std::string& s) {
    if (s == "zero") return TiePolicy::zero;
    if (s == "positive") return TiePolicy::positive;
    if (s == "diagonal") return TiePolicy::diagonal;
    if (s == "seeded_random") return TiePolicy::seeded_random;
    throw std::invalid_argument("unknown tie policy: " + s);
}

namespace {

Rng& require_rng(Rng* rng, const char* what) {
    if (rng == nullptr) {
        throw std::invalid_argument(std::string(what) + ": seeded_random tie policy needs an RNG");
    }
    return *rng;
}

}  // namespace

RealVector sign_select(const RealVector& m, TiePolicy tie, Rng* rng) {
    require_finite(m, "sign_select");
    RealVector out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] < 0.0) {
            out[i] = -1.0;
        } else if (m[i] > 0.0) {
            out[i] = 1.0;
        } else {
            switch (tie) {
                case TiePolicy::zero: out[i] = 0.0; break;
                case TiePolicy::positive: out[i] = 1.0; break;
                case TiePolicy::diagonal: out[i] = 1.0; break;
                case TiePolicy::seeded_random:
                    out[i] = require_rng(rng, "sign_select").uniform(-1.0, 1.0);
                    break;
            }
        }
    }
    return out;
}

RealVector regu_select(const RealVector& m, TiePolicy tie, Rng* rng) {
    require_finite(m, "regu_select");
    const double r = norm(m);
    if (r > 0.0) {
        RealVector out(m.size());
        for (std::size_t i = 0; i < m.size(); ++i) out[i] = m[i] / r;
        return out;
    }
    const std::size_t n = m.size();
    RealVector out(n, 0.0);
    const double unit = 1.0 / std::sqrt(static_cast<double>(n));
    switch (tie) {
        case TiePolicy::zero:
            break;  // minimal-norm element of the ball
        case TiePolicy::positive:
        case TiePolicy::diagonal:
            std::fill(out.begin(), out.end(), unit);
            break;
        case TiePolicy::seeded_random: {
            Rng& r2 = require_rng(rng, "regu_select");
            for (std::size_t i = 0; i < n; ++i) out[i] = r2.uniform(-unit, unit);
            break;
        }
    }
    return out;
}

RealVector clip_select(const RealVector& m, double clip_level) {
    if (!(clip_level > 0.0)) {
        throw std::invalid_argument("clip_select: clip level must be positive");
    }
    require_finite(m, "clip_select");
    RealVector out(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        out[i] = std::min(std::max(m[i], -clip_level), clip_level);
    }
    return out;
}

PhiChoice PhiChoice::clip(double level) {
    if (!(level > 0.0)) {
        throw std::invalid_argument("PhiChoice::clip: clip level must be positive");
    }
    return {PhiKind::clip, level};
}

double phi_value(const RealVector& m, const PhiChoice& phi) {
    require_finite(m, "phi_value");
    switch (phi.kind) {
        case PhiKind::half_square:
            return 0.5 * dot(m, m);
        case PhiKind::l1:
            return norm1(m);
        case PhiKind::l2:
            return norm(m);
        case PhiKind::clip: {
            const double c = phi.clip_level;
            if (!(c > 0.0)) throw std::invalid_argument("phi_value: clip level must be positive");
            double s = 0.0;
            for (double x : m) {
                const double a = std::abs(x);
                s += (a <= c) ? 0.5 * x * x : c * a - 0.5 * c * c;
            }
            return s;
        }
    }
    throw std::logic_error("phi_value: unreachable");
}

RealVector phi_select(const RealVector& m, const PhiChoice& phi, TiePolicy tie, Rng* rng) {
    switch (phi.kind) {
        case PhiKind::half_square:
            require_finite(m, "phi_select");
            return m;
        case PhiKind::l1:
            return sign_select(m, tie, rng);
        case PhiKind::l2:
            return regu_select(m, tie, rng);
        case PhiKind::clip:
            return clip_select(m, phi.clip_level);
    }
    throw std::logic_error("phi_select: unreachable");
}

}  // namespace gsgd
