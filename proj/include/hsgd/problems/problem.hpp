#pragma once

#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"

namespace hsgd {

/// A parametric finite-sum objective f(w, lambda) = (1/N) sum_j f_j(w, lambda)
/// with lambda in [0, 1]; lambda = 0 is the source problem and lambda = 1 the
/// target. Implementations are immutable after construction and every
/// evaluation is a pure function of (w, lambda, indices).
class HomotopyProblem {
public:
    virtual ~HomotopyProblem() = default;

    virtual std::string name() const = 0;
    virtual std::size_t dimension() const = 0;
    virtual std::size_t sample_count() const = 0;

    /// Full-batch objective.
    virtual double objective(const ParamVector& w, double lambda) const = 0;

    /// Mean value and mean gradient over the given samples. `grad` is resized
    /// and overwritten.
    virtual double minibatch_value_and_gradient(const ParamVector& w, double lambda,
                                                std::span<const std::size_t> indices,
                                                ParamVector& grad) const = 0;

    /// Full-batch gradient: the minibatch gradient over samples 0..N-1.
    ParamVector gradient(const ParamVector& w, double lambda) const {
        ParamVector g;
        minibatch_value_and_gradient(w, lambda, all_indices(), g);
        return g;
    }

    std::span<const std::size_t> all_indices() const noexcept { return all_; }

protected:
    // Concrete problems call this once from their constructor.
    void index_samples(std::size_t n) {
        all_.resize(n);
        std::iota(all_.begin(), all_.end(), std::size_t{0});
    }

    void require_dimension(const ParamVector& w) const {
        if (w.size() != dimension())
            throw ConfigError(name() + ": parameter dimension " + std::to_string(w.size()) +
                              " does not match problem dimension " + std::to_string(dimension()));
    }

    static void require_lambda(double lambda) {
        if (!(lambda >= 0.0 && lambda <= 1.0))
            throw DomainError("homotopy parameter " + std::to_string(lambda) + " outside [0, 1]");
    }

private:
    std::vector<std::size_t> all_;
};

/// Label homotopy y_lambda = lambda * y_target + (1 - lambda) * y_source.
class LabelInterpolationMap {
public:
    LabelInterpolationMap() = default;
    LabelInterpolationMap(std::vector<double> y_target, std::vector<double> y_source)
        : target_(std::move(y_target)), source_(std::move(y_source)) {
        if (target_.size() != source_.size())
            throw ConfigError("label map: target and source label counts differ");
    }

    std::size_t size() const noexcept { return target_.size(); }
    const std::vector<double>& target() const noexcept { return target_; }
    const std::vector<double>& source() const noexcept { return source_; }

    double at(std::size_t j, double lambda) const noexcept {
        // Endpoints are returned verbatim so lambda = 0 and 1 reproduce the
        // stored labels bit-for-bit.
        if (lambda == 0.0) return source_[j];
        if (lambda == 1.0) return target_[j];
        return lambda * target_[j] + (1.0 - lambda) * source_[j];
    }

private:
    std::vector<double> target_;
    std::vector<double> source_;
};

inline std::vector<double> interpolate_labels(const LabelInterpolationMap& map, double lambda) {
    if (!(lambda >= 0.0 && lambda <= 1.0))
        throw DomainError("interpolate_labels: lambda " + std::to_string(lambda) + " outside [0, 1]");
    std::vector<double> out(map.size());
    for (std::size_t j = 0; j < out.size(); ++j) out[j] = map.at(j, lambda);
    return out;
}

}  // namespace hsgd
