#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"
#include "hsgd/optim/sgd.hpp"

namespace hsgd {

/// One row of an aggregated trace.
struct TraceRow {
    std::size_t epoch = 0;
    double lambda = 0.0;
    double mean_objective = 0.0;
    double std_objective = 0.0;
    std::optional<double> mean_gap;
    std::size_t grad_evals = 0;
};

using RunTrace = std::vector<TraceRow>;

/// A single repeat's per-epoch samples of some scalar of the iterate.
struct EpochSeries {
    std::vector<std::size_t> epochs;
    std::vector<double> lambdas;
    std::vector<double> values;
    std::vector<std::size_t> grad_evals;
};

/// Samples `evaluate(w)` at epoch boundaries of a run. One epoch is
/// ceil(N / M) steps. Call `start` before the first step and `finish` after
/// the last one; a trailing partial epoch gets its own row.
class EpochRecorder {
public:
    using Evaluator = std::function<double(const ParamVector&)>;

    EpochRecorder(std::size_t sample_count, std::size_t minibatch_size, Evaluator evaluate)
        : steps_per_epoch_((sample_count + minibatch_size - 1) / minibatch_size),
          minibatch_size_(minibatch_size),
          evaluate_(std::move(evaluate)) {
        if (minibatch_size == 0) throw ConfigError("recorder: minibatch size must be positive");
    }

    std::size_t steps_per_epoch() const noexcept { return steps_per_epoch_; }

    void start(const ParamVector& w0, double lambda0) { push(0, lambda0, w0); }

    StepObserver observer() {
        return [this](const StepEvent& e) {
            last_step_ = e.step;
            last_lambda_ = e.lambda;
            if (e.step % steps_per_epoch_ == 0) push(e.step, e.lambda, e.w);
        };
    }

    void finish(const ParamVector& w) {
        if (last_step_ % steps_per_epoch_ != 0) push(last_step_, last_lambda_, w);
    }

    const EpochSeries& series() const noexcept { return series_; }
    EpochSeries take() { return std::move(series_); }

private:
    void push(std::size_t step, double lambda, const ParamVector& w) {
        series_.epochs.push_back((step + steps_per_epoch_ - 1) / steps_per_epoch_);
        series_.lambdas.push_back(lambda);
        series_.values.push_back(evaluate_(w));
        series_.grad_evals.push_back(step * minibatch_size_);
    }

    std::size_t steps_per_epoch_;
    std::size_t minibatch_size_;
    Evaluator evaluate_;
    EpochSeries series_;
    std::size_t last_step_ = 0;
    double last_lambda_ = 0.0;
};

/// Mean and sample standard deviation across repeats, row by row. All
/// series must share their epoch grid. `fstar` fills mean_gap.
inline RunTrace aggregate(const std::vector<EpochSeries>& repeats, std::optional<double> fstar = std::nullopt) {
    RunTrace out;
    if (repeats.empty()) return out;
    const auto& ref = repeats.front();
    for (const auto& r : repeats)
        if (r.epochs != ref.epochs) throw ConfigError("aggregate: repeats have different epoch grids");
    const auto count = static_cast<double>(repeats.size());
    for (std::size_t row = 0; row < ref.epochs.size(); ++row) {
        double mean = 0.0;
        for (const auto& r : repeats) mean += r.values[row];
        mean /= count;
        double ss = 0.0;
        for (const auto& r : repeats) ss += (r.values[row] - mean) * (r.values[row] - mean);
        TraceRow t;
        t.epoch = ref.epochs[row];
        t.lambda = ref.lambdas[row];
        t.mean_objective = mean;
        t.std_objective = repeats.size() > 1 ? std::sqrt(ss / (count - 1.0)) : 0.0;
        if (fstar) t.mean_gap = mean - *fstar;
        t.grad_evals = ref.grad_evals[row];
        out.push_back(t);
    }
    return out;
}

}  // namespace hsgd
