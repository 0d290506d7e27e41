#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace gsgd {

/// Dense real vector; dimension is fixed per problem instance.
using RealVector = std::vector<double>;

inline bool all_finite(std::span<const double> v) {
    for (double x : v) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

/// Throws std::invalid_argument when v contains a NaN or infinity.
inline void require_finite(std::span<const double> v, const char* what) {
    if (!all_finite(v)) {
        throw std::invalid_argument(std::string(what) + ": non-finite coordinate");
    }
}

inline void require_same_dim(const RealVector& a, const RealVector& b, const char* what) {
    if (a.size() != b.size()) {
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
    }
}

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm(std::span<const double> v) {
    return std::sqrt(dot(v, v));
}

inline double norm1(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
}

inline double norm_inf(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s = std::max(s, std::abs(x));
    return s;
}

inline RealVector zeros(std::size_t n) { return RealVector(n, 0.0); }

inline RealVector scaled(const RealVector& v, double s) {
    RealVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = s * v[i];
    return out;
}

inline RealVector add(const RealVector& a, const RealVector& b) {
    RealVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
    return out;
}

inline RealVector sub(const RealVector& a, const RealVector& b) {
    RealVector out(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
    return out;
}

/// y += a * x
inline void axpy_inplace(RealVector& y, double a, const RealVector& x) {
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += a * x[i];
}

inline double distance(const RealVector& a, const RealVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace gsgd
