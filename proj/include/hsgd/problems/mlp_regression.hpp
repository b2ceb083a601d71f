#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "hsgd/core/rng.hpp"
#include "hsgd/problems/problem.hpp"

namespace hsgd {

/// Fixed 1-10-10-1 tanh network trained with mean squared error against
/// interpolated labels.
///
/// Parameter layout (141 entries):
///   [0, 10)     W1  (10x1)
///   [10, 20)    b1
///   [20, 120)   W2  (10x10, row-major: W2[i][j] at 20 + 10 i + j)
///   [120, 130)  b2
///   [130, 140)  W3  (1x10)
///   140         b3
class MlpRegressionProblem final : public HomotopyProblem {
public:
    static constexpr std::size_t hidden = 10;
    static constexpr std::size_t w1_off = 0;
    static constexpr std::size_t b1_off = w1_off + hidden;
    static constexpr std::size_t w2_off = b1_off + hidden;
    static constexpr std::size_t b2_off = w2_off + hidden * hidden;
    static constexpr std::size_t w3_off = b2_off + hidden;
    static constexpr std::size_t b3_off = w3_off + hidden;
    static constexpr std::size_t param_count = b3_off + 1;

    MlpRegressionProblem(std::vector<double> xs, std::vector<double> ys_target, std::vector<double> ys_source)
        : xs_(std::move(xs)), labels_(std::move(ys_target), std::move(ys_source)) {
        if (xs_.empty()) throw ConfigError("mlp problem: empty dataset");
        if (labels_.size() != xs_.size()) throw ConfigError("mlp problem: inputs and labels differ in length");
        index_samples(xs_.size());
    }

    std::string name() const override { return "mlp-regression"; }
    std::size_t dimension() const override { return param_count; }
    std::size_t sample_count() const override { return xs_.size(); }

    const std::vector<double>& inputs() const noexcept { return xs_; }
    const LabelInterpolationMap& labels() const noexcept { return labels_; }

    /// Network output for a single input.
    double predict(const ParamVector& w, double x) const {
        require_dimension(w);
        Activations a;
        forward(w.span(), x, a);
        return a.out;
    }

    double objective(const ParamVector& w, double lambda) const override {
        require_dimension(w);
        require_lambda(lambda);
        Activations a;
        double sum = 0.0;
        for (std::size_t j = 0; j < xs_.size(); ++j) {
            forward(w.span(), xs_[j], a);
            const double r = a.out - labels_.at(j, lambda);
            sum += r * r;
        }
        return sum / static_cast<double>(xs_.size());
    }

    double minibatch_value_and_gradient(const ParamVector& w, double lambda, std::span<const std::size_t> indices,
                                        ParamVector& grad) const override {
        require_dimension(w);
        require_lambda(lambda);
        if (grad.size() != param_count) grad = ParamVector(param_count);
        grad.fill(0.0);

        const auto p = w.span();
        auto g = grad.span();
        Activations a;
        std::array<double, hidden> dz2{}, dz1{};
        double value = 0.0;

        for (std::size_t j : indices) {
            const double x = xs_[j];
            forward(p, x, a);
            const double r = a.out - labels_.at(j, lambda);
            value += r * r;
            const double dout = 2.0 * r;

            g[b3_off] += dout;
            for (std::size_t i = 0; i < hidden; ++i) {
                g[w3_off + i] += dout * a.h2[i];
                dz2[i] = dout * p[w3_off + i] * (1.0 - a.h2[i] * a.h2[i]);
            }
            dz1.fill(0.0);
            for (std::size_t i = 0; i < hidden; ++i) {
                g[b2_off + i] += dz2[i];
                const std::size_t row = w2_off + i * hidden;
                for (std::size_t k = 0; k < hidden; ++k) {
                    g[row + k] += dz2[i] * a.h1[k];
                    dz1[k] += dz2[i] * p[row + k];
                }
            }
            for (std::size_t k = 0; k < hidden; ++k) {
                const double d = dz1[k] * (1.0 - a.h1[k] * a.h1[k]);
                g[b1_off + k] += d;
                g[w1_off + k] += d * x;
            }
        }
        const double inv = 1.0 / static_cast<double>(indices.size());
        grad *= inv;
        return value * inv;
    }

private:
    struct Activations {
        std::array<double, hidden> h1{};
        std::array<double, hidden> h2{};
        double out = 0.0;
    };

    static void forward(std::span<const double> p, double x, Activations& a) {
        for (std::size_t k = 0; k < hidden; ++k) a.h1[k] = std::tanh(p[w1_off + k] * x + p[b1_off + k]);
        double out = p[b3_off];
        for (std::size_t i = 0; i < hidden; ++i) {
            const std::size_t row = w2_off + i * hidden;
            double z = p[b2_off + i];
            for (std::size_t k = 0; k < hidden; ++k) z += p[row + k] * a.h1[k];
            a.h2[i] = std::tanh(z);
            out += p[w3_off + i] * a.h2[i];
        }
        a.out = out;
    }

    std::vector<double> xs_;
    LabelInterpolationMap labels_;
};

/// Seeded initialization: every weight uniform on (-1/sqrt(fan_in), +1/sqrt(fan_in)),
/// biases zero. Weights are drawn in layout order.
inline ParamVector mlp_initial_parameters(std::uint64_t seed) {
    using P = MlpRegressionProblem;
    Rng rng(seed);
    ParamVector w(P::param_count, 0.0);
    const double a1 = 1.0;
    const double a2 = 1.0 / std::sqrt(static_cast<double>(P::hidden));
    for (std::size_t k = 0; k < P::hidden; ++k) w[P::w1_off + k] = rng.uniform(-a1, a1);
    for (std::size_t k = 0; k < P::hidden * P::hidden; ++k) w[P::w2_off + k] = rng.uniform(-a2, a2);
    for (std::size_t k = 0; k < P::hidden; ++k) w[P::w3_off + k] = rng.uniform(-a2, a2);
    return w;
}

}  // namespace hsgd
