#pragma once

#include <cmath>
#include <numbers>
#include <vector>

#include "hsgd/problems/problem.hpp"

namespace hsgd {

/// One-parameter regression f(w, lambda) = (1/N) sum_j (y_{j,lambda} - erf(w x_j))^2
/// with labels interpolated by a LabelInterpolationMap.
class ErfRegressionProblem final : public HomotopyProblem {
public:
    ErfRegressionProblem(std::vector<double> xs, std::vector<double> ys_target, std::vector<double> ys_source)
        : xs_(std::move(xs)), labels_(std::move(ys_target), std::move(ys_source)) {
        if (xs_.empty()) throw ConfigError("erf problem: empty dataset");
        if (labels_.size() != xs_.size()) throw ConfigError("erf problem: inputs and labels differ in length");
        index_samples(xs_.size());
    }

    std::string name() const override { return "erf-regression"; }
    std::size_t dimension() const override { return 1; }
    std::size_t sample_count() const override { return xs_.size(); }

    const std::vector<double>& inputs() const noexcept { return xs_; }
    const LabelInterpolationMap& labels() const noexcept { return labels_; }

    double objective(const ParamVector& w, double lambda) const override {
        require_dimension(w);
        require_lambda(lambda);
        double sum = 0.0;
        for (std::size_t j = 0; j < xs_.size(); ++j) {
            const double r = labels_.at(j, lambda) - std::erf(w[0] * xs_[j]);
            sum += r * r;
        }
        return sum / static_cast<double>(xs_.size());
    }

    double minibatch_value_and_gradient(const ParamVector& w, double lambda, std::span<const std::size_t> indices,
                                        ParamVector& grad) const override {
        require_dimension(w);
        require_lambda(lambda);
        constexpr double erf_slope = 2.0 * std::numbers::inv_sqrtpi;
        double value = 0.0, g = 0.0;
        for (std::size_t j : indices) {
            const double u = w[0] * xs_[j];
            const double r = std::erf(u) - labels_.at(j, lambda);
            value += r * r;
            g += 2.0 * r * erf_slope * std::exp(-u * u) * xs_[j];
        }
        const double inv = 1.0 / static_cast<double>(indices.size());
        grad = ParamVector{g * inv};
        return value * inv;
    }

private:
    std::vector<double> xs_;
    LabelInterpolationMap labels_;
};

/// Source labels y_{j,0} = w0 * x_j, which make w0 a natural start for the
/// lambda = 0 problem.
inline std::vector<double> linear_source_labels(const std::vector<double>& xs, double w0) {
    std::vector<double> out(xs.size());
    for (std::size_t j = 0; j < xs.size(); ++j) out[j] = w0 * xs[j];
    return out;
}

}  // namespace hsgd
