#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "hsgd/problems/problem.hpp"

namespace hsgd {

/// Binary logistic regression with a cubic decision function whose
/// nonlinear terms are switched on by lambda:
///
///   z(x, lambda, c) = lambda (c1 x1^3 + c2 x2^3 + c3 x1^2 + c4 x2^2 + c5 x1^2 x2 + c6 x1 x2^2)
///                     + c7 x1 + c8 x2 + c9
///
/// At lambda = 0 the objective is plain (convex) linear logistic regression.
class CubicLogisticProblem final : public HomotopyProblem {
public:
    static constexpr std::size_t param_count = 9;
    static constexpr std::size_t nonlinear_count = 6;
    using Point = std::array<double, 2>;

    CubicLogisticProblem(std::vector<Point> features, std::vector<double> labels01)
        : x_(std::move(features)), y_(std::move(labels01)) {
        if (x_.empty()) throw ConfigError("logistic problem: empty dataset");
        if (x_.size() != y_.size()) throw ConfigError("logistic problem: features and labels differ in length");
        for (double y : y_)
            if (y != 0.0 && y != 1.0) throw DataError("logistic problem: label outside {0, 1}");
        index_samples(x_.size());
    }

    std::string name() const override { return "cubic-logistic"; }
    std::size_t dimension() const override { return param_count; }
    std::size_t sample_count() const override { return x_.size(); }

    const std::vector<Point>& features() const noexcept { return x_; }
    const std::vector<double>& labels() const noexcept { return y_; }

    /// dz/dc for one point; the first six entries carry the lambda factor.
    static std::array<double, param_count> basis(const Point& x, double lambda) noexcept {
        const double x1 = x[0], x2 = x[1];
        return {lambda * x1 * x1 * x1, lambda * x2 * x2 * x2, lambda * x1 * x1,     lambda * x2 * x2,
                lambda * x1 * x1 * x2, lambda * x1 * x2 * x2, x1,                   x2,
                1.0};
    }

    static double decision(const ParamVector& c, const Point& x, double lambda) {
        const auto b = basis(x, lambda);
        double z = 0.0;
        for (std::size_t i = 0; i < param_count; ++i) z += c[i] * b[i];
        return z;
    }

    double objective(const ParamVector& c, double lambda) const override {
        require_dimension(c);
        require_lambda(lambda);
        double sum = 0.0;
        for (std::size_t j = 0; j < x_.size(); ++j) sum += sample_loss(decision(c, x_[j], lambda), y_[j]);
        return sum / static_cast<double>(x_.size());
    }

    double minibatch_value_and_gradient(const ParamVector& c, double lambda, std::span<const std::size_t> indices,
                                        ParamVector& grad) const override {
        require_dimension(c);
        require_lambda(lambda);
        if (grad.size() != param_count) grad = ParamVector(param_count);
        grad.fill(0.0);
        double value = 0.0;
        for (std::size_t j : indices) {
            const auto b = basis(x_[j], lambda);
            double z = 0.0;
            for (std::size_t i = 0; i < param_count; ++i) z += c[i] * b[i];
            value += sample_loss(z, y_[j]);
            const double r = sigmoid(z) - y_[j];
            for (std::size_t i = 0; i < param_count; ++i) grad[i] += r * b[i];
        }
        const double inv = 1.0 / static_cast<double>(indices.size());
        grad *= inv;
        return value * inv;
    }

    /// Fraction of training points misclassified at threshold sigmoid(z) >= 1/2.
    double classification_error(const ParamVector& c, double lambda = 1.0) const {
        require_dimension(c);
        std::size_t wrong = 0;
        for (std::size_t j = 0; j < x_.size(); ++j) {
            const double predicted = decision(c, x_[j], lambda) >= 0.0 ? 1.0 : 0.0;
            if (predicted != y_[j]) ++wrong;
        }
        return static_cast<double>(wrong) / static_cast<double>(x_.size());
    }

    static double sigmoid(double z) noexcept {
        if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
        const double e = std::exp(z);
        return e / (1.0 + e);
    }

    // -y log s(z) - (1 - y) log(1 - s(z)) = softplus(z) - y z
    static double sample_loss(double z, double y) noexcept {
        const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
        return softplus - y * z;
    }

private:
    std::vector<Point> x_;
    std::vector<double> y_;
};

}  // namespace hsgd
