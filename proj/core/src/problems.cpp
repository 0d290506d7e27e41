#include "gsgd/problems.hpp"

#include <cmath>
#include <utility>

#include "gsgd/rng.hpp"

namespace gsgd {

std::string to_string(KinkSide side) {
    return side == KinkSide::plus ? "plus" : "minus";
}

KinkSide kink_side_from_string(const std::string& s) {
    if (s == "plus") return KinkSide::plus;
    if (s == "minus") return KinkSide::minus;
    throw std::invalid_argument("unknown kink side: " + s);
}

std::string to_string(LossKind loss) {
    return loss == LossKind::l1 ? "l1" : "half_square";
}

LossKind loss_kind_from_string(const std::string& s) {
    if (s == "l1") return LossKind::l1;
    if (s == "half_square") return LossKind::half_square;
    throw std::invalid_argument("unknown loss kind: " + s);
}

HullStructure Problem::hull_structure(const RealVector&) const {
    throw HullUnavailableError("problem does not expose a hull oracle");
}

double Problem::value(const RealVector& x) const {
    require_finite(x, "Problem::value");
    const std::size_t n = component_count();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += component_value(i, x);
    return s / static_cast<double>(n);
}

RealVector Problem::selection(const RealVector& x) const {
    require_finite(x, "Problem::selection");
    const std::size_t n = component_count();
    RealVector acc(dimension(), 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        axpy_inplace(acc, 1.0, component_selection(i, x));
    }
    for (double& v : acc) v /= static_cast<double>(n);
    return acc;
}

HullDescription Problem::hull_at(const RealVector& x) const {
    const HullStructure hs = hull_structure(x);
    const std::size_t k = hs.kink_count();
    if (k > kMaxHullKinks) {
        throw TooManyKinksError("hull enumeration rejected: " + std::to_string(k) +
                                " kinked components exceed the cap of " +
                                std::to_string(kMaxHullKinks));
    }
    HullDescription out;
    out.dimension = dimension();
    const std::size_t count = std::size_t{1} << k;
    out.vertices.reserve(count);
    for (std::size_t mask = 0; mask < count; ++mask) {
        RealVector v = hs.offset;
        for (std::size_t i = 0; i < k; ++i) {
            const double s = (mask >> i) & 1 ? -1.0 : 1.0;
            axpy_inplace(v, s, hs.generators[i]);
        }
        out.vertices.push_back(std::move(v));
    }
    return out;
}

namespace {

double side_sign(double t, KinkSide side) {
    if (t > 0.0) return 1.0;
    if (t < 0.0) return -1.0;
    return side == KinkSide::plus ? 1.0 : -1.0;
}

// ---------------------------------------------------------------------------
// |2u + v| + |u + 10|

class CounterexampleProblem final : public Problem {
public:
    CounterexampleProblem(KinkSide side, double kink_tol) : side_(side), kink_tol_(kink_tol) {}

    std::size_t component_count() const override { return 1; }
    std::size_t dimension() const override { return 2; }

    double component_value(std::size_t, const RealVector& x) const override {
        require_finite(x, "counterexample value");
        return std::abs(2.0 * x[0] + x[1]) + std::abs(x[0] + 10.0);
    }

    RealVector component_selection(std::size_t, const RealVector& x) const override {
        require_finite(x, "counterexample selection");
        const double s1 = side_sign(2.0 * x[0] + x[1], side_);
        const double s2 = side_sign(x[0] + 10.0, side_);
        return {s1 * 2.0 + s2, s1};
    }

    bool has_hull_oracle() const override { return true; }

    HullStructure hull_structure(const RealVector& x) const override {
        require_finite(x, "counterexample hull");
        HullStructure hs;
        hs.offset = {0.0, 0.0};
        const double t1 = 2.0 * x[0] + x[1];
        const double t2 = x[0] + 10.0;
        if (std::abs(t1) <= kink_tol_) {
            hs.generators.push_back({2.0, 1.0});
        } else {
            const double s = t1 > 0.0 ? 1.0 : -1.0;
            hs.offset[0] += s * 2.0;
            hs.offset[1] += s * 1.0;
        }
        if (std::abs(t2) <= kink_tol_) {
            hs.generators.push_back({1.0, 0.0});
        } else {
            hs.offset[0] += t2 > 0.0 ? 1.0 : -1.0;
        }
        return hs;
    }

private:
    KinkSide side_;
    double kink_tol_;
};

// ---------------------------------------------------------------------------
// f_i(x) = |<a_i, x> - b_i|

class L1RegressionProblem final : public Problem {
public:
    L1RegressionProblem(Matrix a, RealVector b, KinkSide side, double kink_tol)
        : a_(std::move(a)), b_(std::move(b)), side_(side), kink_tol_(kink_tol) {
        if (a_.empty() || a_.front().empty()) {
            throw std::invalid_argument("l1 regression: empty design matrix");
        }
        if (a_.size() != b_.size()) {
            throw std::invalid_argument("l1 regression: row count does not match label count");
        }
        for (const RealVector& row : a_) {
            if (row.size() != a_.front().size()) {
                throw std::invalid_argument("l1 regression: ragged design matrix");
            }
            require_finite(row, "l1 regression row");
        }
        require_finite(b_, "l1 regression labels");
    }

    std::size_t component_count() const override { return a_.size(); }
    std::size_t dimension() const override { return a_.front().size(); }

    double component_value(std::size_t i, const RealVector& x) const override {
        return std::abs(residual(i, x));
    }

    RealVector component_selection(std::size_t i, const RealVector& x) const override {
        return scaled(a_[i], side_sign(residual(i, x), side_));
    }

    bool has_hull_oracle() const override { return true; }

    HullStructure hull_structure(const RealVector& x) const override {
        require_finite(x, "l1 regression hull");
        const double inv_n = 1.0 / static_cast<double>(a_.size());
        HullStructure hs;
        hs.offset.assign(dimension(), 0.0);
        for (std::size_t i = 0; i < a_.size(); ++i) {
            const double r = residual(i, x);
            if (std::abs(r) <= kink_tol_) {
                hs.generators.push_back(scaled(a_[i], inv_n));
            } else {
                axpy_inplace(hs.offset, (r > 0.0 ? inv_n : -inv_n), a_[i]);
            }
        }
        return hs;
    }

private:
    double residual(std::size_t i, const RealVector& x) const {
        if (x.size() != dimension()) {
            throw std::invalid_argument("l1 regression: point dimension mismatch");
        }
        require_finite(x, "l1 regression point");
        return dot(a_[i], x) - b_[i];
    }

    Matrix a_;
    RealVector b_;
    KinkSide side_;
    double kink_tol_;
};

// ---------------------------------------------------------------------------
// One-hidden-layer ReLU net, reverse-mode selection with ReLU'(0) := c_relu.

class ReluNetProblem final : public Problem {
public:
    ReluNetProblem(std::size_t n_in, std::size_t n_hidden, Matrix inputs, RealVector labels,
                   LossKind loss, double c_relu)
        : n_in_(n_in),
          n_hidden_(n_hidden),
          inputs_(std::move(inputs)),
          labels_(std::move(labels)),
          loss_(loss),
          c_relu_(c_relu) {
        if (n_in_ == 0 || n_hidden_ == 0) {
            throw std::invalid_argument("relu net: zero layer width");
        }
        if (n_hidden_ > 16) {
            throw std::invalid_argument("relu net: hidden width exceeds the desk-scale cap of 16");
        }
        if (!(c_relu_ >= 0.0 && c_relu_ <= 1.0)) {
            throw std::invalid_argument("relu net: c_relu must lie in [0, 1]");
        }
        if (inputs_.empty() || inputs_.size() != labels_.size()) {
            throw std::invalid_argument("relu net: input/label count mismatch");
        }
        for (const RealVector& row : inputs_) {
            if (row.size() != n_in_) throw std::invalid_argument("relu net: input dimension mismatch");
            require_finite(row, "relu net input");
        }
        require_finite(labels_, "relu net labels");
    }

    std::size_t component_count() const override { return inputs_.size(); }
    std::size_t dimension() const override { return relu_net_dimension(n_in_, n_hidden_); }

    double component_value(std::size_t i, const RealVector& x) const override {
        const double r = forward(i, x).residual;
        return loss_ == LossKind::l1 ? std::abs(r) : 0.5 * r * r;
    }

    RealVector component_selection(std::size_t i, const RealVector& x) const override {
        return backward(i, x, c_relu_);
    }

    RealVector selection_with_parameter(const RealVector& x, double t) const override {
        const std::size_t n = component_count();
        RealVector acc(dimension(), 0.0);
        for (std::size_t i = 0; i < n; ++i) axpy_inplace(acc, 1.0, backward(i, x, t));
        for (double& v : acc) v /= static_cast<double>(n);
        return acc;
    }

private:
    struct Forward {
        RealVector pre;   // n_hidden pre-activations
        RealVector post;  // relu(pre)
        double out = 0.0;
        double residual = 0.0;
    };

    // layout: W1 row-major (n_hidden x n_in), b1, w2, b2
    std::size_t w1_at(std::size_t j, std::size_t i) const { return j * n_in_ + i; }
    std::size_t b1_at(std::size_t j) const { return n_hidden_ * n_in_ + j; }
    std::size_t w2_at(std::size_t j) const { return n_hidden_ * n_in_ + n_hidden_ + j; }
    std::size_t b2_at() const { return n_hidden_ * n_in_ + 2 * n_hidden_; }

    Forward forward(std::size_t sample, const RealVector& x) const {
        if (x.size() != dimension()) {
            throw std::invalid_argument("relu net: weight vector dimension mismatch");
        }
        require_finite(x, "relu net weights");
        const RealVector& a = inputs_[sample];
        Forward f;
        f.pre.resize(n_hidden_);
        f.post.resize(n_hidden_);
        double out = x[b2_at()];
        for (std::size_t j = 0; j < n_hidden_; ++j) {
            double z = x[b1_at(j)];
            for (std::size_t i = 0; i < n_in_; ++i) z += x[w1_at(j, i)] * a[i];
            f.pre[j] = z;
            f.post[j] = z > 0.0 ? z : 0.0;
            out += x[w2_at(j)] * f.post[j];
        }
        f.out = out;
        f.residual = out - labels_[sample];
        return f;
    }

    RealVector backward(std::size_t sample, const RealVector& x, double relu_zero) const {
        const Forward f = forward(sample, x);
        double dout = 0.0;
        switch (loss_) {
            case LossKind::l1:
                // derivative of |r| with the AD convention sign(0) = 0
                dout = f.residual > 0.0 ? 1.0 : (f.residual < 0.0 ? -1.0 : 0.0);
                break;
            case LossKind::half_square:
                dout = f.residual;
                break;
        }
        const RealVector& a = inputs_[sample];
        RealVector grad(dimension(), 0.0);
        grad[b2_at()] = dout;
        for (std::size_t j = 0; j < n_hidden_; ++j) {
            grad[w2_at(j)] = dout * f.post[j];
            const double relu_d = f.pre[j] > 0.0 ? 1.0 : (f.pre[j] < 0.0 ? 0.0 : relu_zero);
            const double dz = dout * x[w2_at(j)] * relu_d;
            grad[b1_at(j)] = dz;
            for (std::size_t i = 0; i < n_in_; ++i) grad[w1_at(j, i)] = dz * a[i];
        }
        return grad;
    }

    std::size_t n_in_;
    std::size_t n_hidden_;
    Matrix inputs_;
    RealVector labels_;
    LossKind loss_;
    double c_relu_;
};

}  // namespace

std::unique_ptr<Problem> make_counterexample(KinkSide side, double kink_tol) {
    return std::make_unique<CounterexampleProblem>(side, kink_tol);
}

std::unique_ptr<Problem> make_l1_regression(Matrix a, RealVector b, KinkSide side, double kink_tol) {
    return std::make_unique<L1RegressionProblem>(std::move(a), std::move(b), side, kink_tol);
}

SyntheticData generate_synthetic(const SyntheticRecipe& recipe) {
    if (recipe.rows == 0 || recipe.cols == 0) {
        throw std::invalid_argument("synthetic recipe: rows and cols must be >= 1");
    }
    Rng rng(recipe.data_seed);
    SyntheticData data;
    data.planted.resize(recipe.cols);
    for (double& v : data.planted) v = rng.normal();
    data.a.resize(recipe.rows);
    data.b.resize(recipe.rows);
    for (std::size_t i = 0; i < recipe.rows; ++i) {
        data.a[i].resize(recipe.cols);
        for (double& v : data.a[i]) v = rng.normal();
        data.b[i] = dot(data.a[i], data.planted);
        if (recipe.noise_std > 0.0) data.b[i] += recipe.noise_std * rng.normal();
    }
    return data;
}

std::size_t relu_net_dimension(std::size_t n_in, std::size_t n_hidden) {
    return n_hidden * n_in + 2 * n_hidden + 1;
}

std::unique_ptr<Problem> make_relu_net(std::size_t n_in, std::size_t n_hidden, Matrix inputs,
                                       RealVector labels, LossKind loss, double c_relu) {
    return std::make_unique<ReluNetProblem>(n_in, n_hidden, std::move(inputs), std::move(labels),
                                            loss, c_relu);
}

}  // namespace gsgd
