#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"
#include "hsgd/core/rng.hpp"
#include "hsgd/problems/problem.hpp"

namespace hsgd {

struct SgdConfig {
    double step_size = 0.0;        // alpha
    std::size_t steps = 1;         // k
    std::size_t minibatch_size = 1;  // M

    /// Non-fatal notes: alpha above 1/L_estimate, which the linear-rate
    /// analysis assumes against.
    std::vector<std::string> warnings(std::optional<double> smoothness_estimate = std::nullopt) const {
        std::vector<std::string> out;
        if (smoothness_estimate && *smoothness_estimate > 0.0 && step_size > 1.0 / *smoothness_estimate)
            out.push_back("step size " + std::to_string(step_size) + " exceeds 1/L_estimate = " +
                          std::to_string(1.0 / *smoothness_estimate));
        return out;
    }
};

/// Passed to an observer after every accepted SGD step.
struct StepEvent {
    std::size_t step;  // 1-based count of steps completed in the whole run
    double lambda;
    const ParamVector& w;
};

using StepObserver = std::function<void(const StepEvent&)>;

inline void validate(const SgdConfig& cfg, const HomotopyProblem& problem) {
    if (!(cfg.step_size > 0.0) || !std::isfinite(cfg.step_size)) throw ConfigError("SGD: step size must be positive");
    if (cfg.minibatch_size == 0) throw ConfigError("SGD: minibatch size must be positive");
    if (cfg.minibatch_size > problem.sample_count())
        throw ConfigError("SGD: minibatch size " + std::to_string(cfg.minibatch_size) + " exceeds sample count " +
                          std::to_string(problem.sample_count()));
}

/// Runs k iterations of w <- w - alpha * g(w, xi, lambda), where g is the
/// mean gradient over M distinct samples drawn from `rng`.
///
/// `step_offset` is added to the step index reported to the observer and in
/// errors, so that a homotopy run can number steps globally. Non-finite
/// gradients or iterates abort with NonFiniteError; nothing is clipped.
inline ParamVector sgd_run(ParamVector w, const SgdConfig& cfg, const HomotopyProblem& problem, double lambda,
                           Rng& rng, const StepObserver& observer = {}, std::size_t step_offset = 0) {
    validate(cfg, problem);
    if (w.size() != problem.dimension())
        throw ConfigError("SGD: initial point has dimension " + std::to_string(w.size()) + ", problem expects " +
                          std::to_string(problem.dimension()));
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw DomainError("SGD: lambda outside [0, 1]");

    MinibatchSampler sampler(problem.sample_count());
    ParamVector grad(problem.dimension());
    for (std::size_t t = 1; t <= cfg.steps; ++t) {
        const auto batch = sampler.draw(rng, cfg.minibatch_size);
        problem.minibatch_value_and_gradient(w, lambda, batch, grad);
        if (!grad.all_finite()) throw NonFiniteError(step_offset + t, "gradient");
        w.axpy(-cfg.step_size, grad);
        if (!w.all_finite()) throw NonFiniteError(step_offset + t, "iterate");
        if (observer) observer(StepEvent{step_offset + t, lambda, w});
    }
    return w;
}

}  // namespace hsgd
