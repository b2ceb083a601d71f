#pragma once

#include <cmath>
#include <vector>

#include "hsgd/problems/problem.hpp"

namespace hsgd {

/// Synthetic family with every landscape constant known in closed form.
///
///   f_j(w, lambda) = mu/2 (w - lambda)^2 + a_j (w - lambda),   sum_j a_j = 0
///   f(w, lambda)   = mu/2 (w - lambda)^2,   f*(lambda) = 0,   L = mu
///
/// The offsets a_j only perturb the stochastic gradients. The default
/// offsets alternate +spread, -spread, so N must be even.
class LinearQuadraticProblem final : public HomotopyProblem {
public:
    LinearQuadraticProblem(double mu, std::vector<double> offsets) : mu_(mu), a_(std::move(offsets)) {
        if (!(mu_ > 0.0)) throw ConfigError("linear-quadratic problem: mu must be positive");
        if (a_.empty()) throw ConfigError("linear-quadratic problem: empty dataset");
        double mean = 0.0;
        for (double a : a_) mean += a;
        mean /= static_cast<double>(a_.size());
        // Centre exactly so that f*(lambda) = 0 holds without rounding drift.
        for (double& a : a_) a -= mean;
        index_samples(a_.size());
    }

    static LinearQuadraticProblem alternating(double mu, std::size_t n, double spread) {
        if (n == 0 || n % 2 != 0) throw ConfigError("linear-quadratic problem: sample count must be even");
        std::vector<double> a(n);
        for (std::size_t j = 0; j < n; ++j) a[j] = (j % 2 == 0) ? spread : -spread;
        return LinearQuadraticProblem(mu, std::move(a));
    }

    std::string name() const override { return "linear-quadratic"; }
    std::size_t dimension() const override { return 1; }
    std::size_t sample_count() const override { return a_.size(); }

    double mu() const noexcept { return mu_; }
    const std::vector<double>& offsets() const noexcept { return a_; }

    double objective(const ParamVector& w, double lambda) const override {
        require_dimension(w);
        require_lambda(lambda);
        const double e = w[0] - lambda;
        return 0.5 * mu_ * e * e;
    }

    double minibatch_value_and_gradient(const ParamVector& w, double lambda, std::span<const std::size_t> indices,
                                        ParamVector& grad) const override {
        require_dimension(w);
        require_lambda(lambda);
        const double e = w[0] - lambda;
        double abar = 0.0;
        for (std::size_t j : indices) abar += a_[j];
        abar /= static_cast<double>(indices.size());
        grad = ParamVector{mu_ * e + abar};
        return 0.5 * mu_ * e * e + abar * e;
    }

    /// Exact variance of the size-M minibatch gradient (sampling without
    /// replacement): s^2 (N - M) / (M (N - 1)) with s^2 = mean(a_j^2).
    double minibatch_variance(std::size_t m) const {
        const auto n = static_cast<double>(a_.size());
        if (m == 0 || m > a_.size()) throw ConfigError("minibatch size out of range");
        if (a_.size() == 1) return 0.0;
        double s2 = 0.0;
        for (double a : a_) s2 += a * a;
        s2 /= n;
        const auto md = static_cast<double>(m);
        return s2 * (n - md) / (md * (n - 1.0));
    }

private:
    double mu_;
    std::vector<double> a_;
};

}  // namespace hsgd
