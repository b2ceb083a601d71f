#pragma once

#include <algorithm>
#include <functional>

#include "hsgd/optim/schedule.hpp"
#include "hsgd/optim/sgd.hpp"

namespace hsgd {

/// Reported after each outer (homotopy) iteration completes.
struct HomotopyEvent {
    std::size_t iteration;  // i in 1..n
    double lambda;          // lambda_i
    const ParamVector& w;   // w_i
};

using HomotopyObserver = std::function<void(const HomotopyEvent&)>;

/// Homotopy-SGD: lambda_0 = 0; for i = 1..n, lambda_i = lambda_{i-1} + h(i)
/// and w_i = sgd_run(w_{i-1}, cfg, family, lambda_i). Returns w_n.
///
/// The same `rng` stream continues through every inner solve. `w0` should be
/// an approximate solution of the lambda = 0 problem; this is not checked.
inline ParamVector hsgd_run(ParamVector w0, const Schedule& schedule, const SgdConfig& cfg,
                            const HomotopyProblem& family, Rng& rng, const StepObserver& on_step = {},
                            const HomotopyObserver& on_iteration = {}) {
    if (schedule.size() == 0) throw ConfigError("H-SGD: empty schedule");
    validate(cfg, family);

    ParamVector w = std::move(w0);
    double lambda = 0.0;
    for (std::size_t i = 1; i <= schedule.size(); ++i) {
        lambda = std::min(1.0, lambda + schedule.increment(i));
        try {
            w = sgd_run(std::move(w), cfg, family, lambda, rng, on_step, (i - 1) * cfg.steps);
        } catch (const NonFiniteError& e) {
            throw NonFiniteError(e, i, lambda);
        }
        if (on_iteration) on_iteration(HomotopyEvent{i, lambda, w});
    }
    return w;
}

}  // namespace hsgd
