#include "gsgd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace gsgd {

namespace {

// Linear minimization oracle over a finitely generated convex set: given a
// direction w, produce the generating point minimizing <w, p>.
class Lmo {
public:
    virtual ~Lmo() = default;
    virtual RealVector initial() const = 0;
    virtual RealVector argmin(const RealVector& w) const = 0;
};

class VertexLmo final : public Lmo {
public:
    explicit VertexLmo(const HullDescription& hull) : hull_(hull) {
        if (hull_.vertices.empty()) {
            throw std::invalid_argument("min_norm_in_hull: empty vertex list");
        }
    }

    RealVector initial() const override {
        std::size_t best = 0;
        double best_norm = norm(hull_.vertices[0]);
        for (std::size_t i = 1; i < hull_.vertices.size(); ++i) {
            const double v = norm(hull_.vertices[i]);
            if (v < best_norm) {
                best_norm = v;
                best = i;
            }
        }
        return hull_.vertices[best];
    }

    RealVector argmin(const RealVector& w) const override {
        std::size_t best = 0;
        double best_val = dot(w, hull_.vertices[0]);
        for (std::size_t i = 1; i < hull_.vertices.size(); ++i) {
            const double v = dot(w, hull_.vertices[i]);
            if (v < best_val) {  // strict: lowest index wins ties
                best_val = v;
                best = i;
            }
        }
        return hull_.vertices[best];
    }

private:
    const HullDescription& hull_;
};

class StructureLmo final : public Lmo {
public:
    explicit StructureLmo(std::span<const HullStructure> structures) : structures_(structures) {
        if (structures_.empty()) {
            throw std::invalid_argument("min_norm_over_structures: empty structure list");
        }
    }

    RealVector initial() const override {
        // vertex realized by minimizing along the first offset direction
        return vertex_for(structures_[0], structures_[0].offset);
    }

    RealVector argmin(const RealVector& w) const override {
        std::size_t best = 0;
        double best_val = support_min(structures_[0], w);
        for (std::size_t j = 1; j < structures_.size(); ++j) {
            const double v = support_min(structures_[j], w);
            if (v < best_val) {
                best_val = v;
                best = j;
            }
        }
        return vertex_for(structures_[best], w);
    }

private:
    static double support_min(const HullStructure& hs, const RealVector& w) {
        double v = dot(w, hs.offset);
        for (const RealVector& g : hs.generators) v -= std::abs(dot(w, g));
        return v;
    }

    static RealVector vertex_for(const HullStructure& hs, const RealVector& w) {
        RealVector p = hs.offset;
        for (const RealVector& g : hs.generators) {
            const double s = dot(w, g) > 0.0 ? -1.0 : 1.0;
            axpy_inplace(p, s, g);
        }
        return p;
    }

    std::span<const HullStructure> structures_;
};

// Solves min ||sum a_i s_i|| s.t. sum a_i = 1 via the KKT system
// [Gram 1; 1^T 0] [a; -mu] = [0; 1] with partial pivoting.
// Returns false when the system is numerically singular.
bool affine_min_norm(const std::vector<RealVector>& s, std::vector<double>& a) {
    const std::size_t r = s.size();
    const std::size_t m = r + 1;
    std::vector<double> mat(m * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t i = 0; i < r; ++i) {
        for (std::size_t j = 0; j < r; ++j) mat[i * m + j] = dot(s[i], s[j]);
        mat[i * m + r] = 1.0;
        mat[r * m + i] = 1.0;
    }
    rhs[r] = 1.0;

    for (std::size_t col = 0; col < m; ++col) {
        std::size_t piv = col;
        for (std::size_t row = col + 1; row < m; ++row) {
            if (std::abs(mat[row * m + col]) > std::abs(mat[piv * m + col])) piv = row;
        }
        if (std::abs(mat[piv * m + col]) < 1e-13) return false;
        if (piv != col) {
            for (std::size_t j = 0; j < m; ++j) std::swap(mat[piv * m + j], mat[col * m + j]);
            std::swap(rhs[piv], rhs[col]);
        }
        for (std::size_t row = col + 1; row < m; ++row) {
            const double f = mat[row * m + col] / mat[col * m + col];
            if (f == 0.0) continue;
            for (std::size_t j = col; j < m; ++j) mat[row * m + j] -= f * mat[col * m + j];
            rhs[row] -= f * rhs[col];
        }
    }
    std::vector<double> sol(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
        double v = rhs[ii];
        for (std::size_t j = ii + 1; j < m; ++j) v -= mat[ii * m + j] * sol[j];
        sol[ii] = v / mat[ii * m + ii];
    }
    a.assign(sol.begin(), sol.begin() + static_cast<std::ptrdiff_t>(r));
    return true;
}

MinNormResult wolfe_min_norm(const Lmo& lmo, std::size_t dimension, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("min-norm: tolerance must be positive");

    std::vector<RealVector> corral{lmo.initial()};
    std::vector<double> weights{1.0};
    RealVector x = corral[0];

    const auto recombine = [&]() {
        x.assign(dimension, 0.0);
        for (std::size_t i = 0; i < corral.size(); ++i) axpy_inplace(x, weights[i], corral[i]);
    };

    const std::size_t max_major = 64 * (dimension + 4);
    for (std::size_t major = 0; major < max_major; ++major) {
        const RealVector p = lmo.argmin(x);
        const double gap = dot(x, x) - dot(x, p);
        if (gap <= tol) break;
        if (std::find(corral.begin(), corral.end(), p) != corral.end()) break;
        corral.push_back(p);
        weights.push_back(0.0);

        // minor cycle: restore a corral whose affine minimizer has
        // nonnegative weights
        bool solved = true;
        for (std::size_t minor = 0; minor < corral.size() + dimension + 4; ++minor) {
            std::vector<double> a;
            if (!affine_min_norm(corral, a)) {
                solved = false;
                break;
            }
            const double min_a = *std::min_element(a.begin(), a.end());
            if (min_a >= -1e-12) {
                for (double& v : a) v = std::max(v, 0.0);
                weights = std::move(a);
                break;
            }
            double step = 1.0;
            for (std::size_t i = 0; i < a.size(); ++i) {
                if (a[i] < 0.0 && weights[i] > a[i]) {
                    step = std::min(step, weights[i] / (weights[i] - a[i]));
                }
            }
            for (std::size_t i = 0; i < a.size(); ++i) {
                weights[i] = (1.0 - step) * weights[i] + step * a[i];
            }
            // drop the points forced to zero weight
            for (std::size_t i = corral.size(); i-- > 0;) {
                if (weights[i] <= 1e-12) {
                    corral.erase(corral.begin() + static_cast<std::ptrdiff_t>(i));
                    weights.erase(weights.begin() + static_cast<std::ptrdiff_t>(i));
                }
            }
            if (corral.size() <= 1) {
                if (corral.empty()) {
                    corral.push_back(p);
                }
                weights.assign(corral.size(), 1.0 / static_cast<double>(corral.size()));
                break;
            }
        }
        recombine();
        if (!solved) break;
    }

    MinNormResult out;
    if (dot(x, x) <= tol) {
        out.point.assign(dimension, 0.0);
        out.norm = 0.0;
    } else {
        out.point = std::move(x);
        out.norm = norm(out.point);
    }
    return out;
}

}  // namespace

MinNormResult min_norm_in_hull(const HullDescription& hull, double tol) {
    VertexLmo lmo(hull);
    const std::size_t dim = hull.dimension != 0 ? hull.dimension : hull.vertices.front().size();
    return wolfe_min_norm(lmo, dim, tol);
}

MinNormResult min_norm_over_structures(std::span<const HullStructure> structures, double tol) {
    StructureLmo lmo(structures);
    return wolfe_min_norm(lmo, structures.front().offset.size(), tol);
}

double distance_to_structures(const RealVector& p, std::span<const HullStructure> structures,
                              double tol) {
    std::vector<HullStructure> shifted(structures.begin(), structures.end());
    for (HullStructure& hs : shifted) {
        for (std::size_t i = 0; i < hs.offset.size(); ++i) hs.offset[i] -= p[i];
    }
    return min_norm_over_structures(shifted, tol).norm;
}

StationarityValue stationarity_measure(const Problem& problem, const RealVector& x, double tol,
                                       std::size_t samples) {
    if (problem.has_hull_oracle()) {
        const HullStructure hs = problem.hull_structure(x);
        if (hs.kink_count() <= kMaxHullKinks) {
            return {min_norm_in_hull(problem.hull_at(x), tol).norm, false};
        }
        // beyond the enumeration cap the segment form is still exact
        return {min_norm_over_structures(std::span(&hs, 1), tol).norm, false};
    }
    if (samples == 0) throw std::invalid_argument("stationarity_measure: samples must be >= 1");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < samples; ++j) {
        const double t = samples == 1 ? 0.0
                                      : static_cast<double>(j) / static_cast<double>(samples - 1);
        best = std::min(best, norm(problem.selection_with_parameter(x, t)));
    }
    return {best, true};
}

double lyapunov_h(const Problem& problem, const RealVector& x, const RealVector& m,
                  const PhiChoice& phi, double tau) {
    if (!(tau > 0.0)) throw std::invalid_argument("lyapunov_h: tau must be positive");
    return problem.value(x) + phi_value(m, phi) / tau;
}

double momentum_gap(const Problem& problem, const RealVector& x, const RealVector& m,
                    double delta, double tol) {
    if (delta < 0.0) throw std::invalid_argument("momentum_gap: delta must be >= 0");
    std::vector<HullStructure> structures;
    structures.push_back(problem.hull_structure(x));
    if (delta > 0.0) {
        RealVector y = x;
        for (std::size_t i = 0; i < x.size(); ++i) {
            for (const double s : {delta, -delta}) {
                y[i] = x[i] + s;
                structures.push_back(problem.hull_structure(y));
            }
            y[i] = x[i];
        }
    }
    const double dist = distance_to_structures(m, structures, tol);
    return std::max(0.0, dist - delta);
}

InterpolatedPath::InterpolatedPath(std::vector<RealVector> points, std::vector<double> etas)
    : points_(std::move(points)), etas_(std::move(etas)) {
    if (points_.empty()) throw std::invalid_argument("InterpolatedPath: no points");
    if (etas_.size() + 1 != points_.size()) {
        throw std::invalid_argument("InterpolatedPath: needs len(etas) = len(points) - 1");
    }
    knots_.resize(points_.size());
    knots_[0] = 0.0;
    for (std::size_t i = 0; i < etas_.size(); ++i) {
        if (!(etas_[i] > 0.0)) throw std::invalid_argument("InterpolatedPath: stepsizes must be positive");
        knots_[i + 1] = knots_[i] + etas_[i];
    }
}

RealVector InterpolatedPath::at(double t) const {
    if (!(t >= 0.0) || t > knots_.back()) {
        throw std::out_of_range("InterpolatedPath::at: t outside [0, total_time()]");
    }
    // largest i with knots_[i] <= t
    const auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
    std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    if (i + 1 == points_.size()) return points_.back();
    const double ratio = (t - knots_[i]) / etas_[i];
    RealVector out(points_[i].size());
    for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] = points_[i][j] + ratio * (points_[i + 1][j] - points_[i][j]);
    }
    return out;
}

double di_shadow_distance(const Problem& problem, const std::vector<RealVector>& points,
                          const std::vector<double>& etas, double window, double fine_step,
                          double alpha, std::size_t probes) {
    if (!(window > 0.0)) throw std::invalid_argument("di_shadow_distance: window must be positive");
    if (!(fine_step > 0.0)) throw std::invalid_argument("di_shadow_distance: fine_step must be positive");
    if (probes == 0) throw std::invalid_argument("di_shadow_distance: probes must be >= 1");

    const InterpolatedPath path(points, etas);
    const double total = path.total_time();
    const double lo = total / 2.0;
    const double hi = total - window;
    if (hi < lo) {
        throw std::invalid_argument("di_shadow_distance: run shorter than twice the window");
    }

    double worst = 0.0;
    for (std::size_t p = 0; p < probes; ++p) {
        const double t0 = probes == 1
                              ? lo
                              : lo + (hi - lo) * static_cast<double>(p) / static_cast<double>(probes - 1);
        RealVector y = path.at(t0);
        double s = t0;
        const double end = t0 + window;
        while (s < end) {
            const double h = std::min(fine_step, end - s);
            const RealVector d = problem.selection(y);
            axpy_inplace(y, -h * (1.0 + alpha), d);
            s += h;
            worst = std::max(worst, distance(y, path.at(std::min(s, total))));
        }
    }
    return worst;
}

}  // namespace gsgd
