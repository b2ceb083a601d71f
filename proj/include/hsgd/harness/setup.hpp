#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hsgd/core/param_vector.hpp"
#include "hsgd/core/rng.hpp"
#include "hsgd/data/datasets.hpp"
#include "hsgd/diagnostics/estimators.hpp"
#include "hsgd/harness/config.hpp"
#include "hsgd/problems/cubic_logistic.hpp"
#include "hsgd/problems/erf_regression.hpp"
#include "hsgd/problems/linear_quadratic.hpp"
#include "hsgd/problems/mlp_regression.hpp"

namespace hsgd::harness {

/// Dataset for an experiment. synthetic-lq has no inputs in the usual
/// sense: x1 is the sample index and y the centred offset a_j.
inline Dataset make_dataset(const ExperimentConfig& c) {
    const auto& d = c.data;
    switch (c.experiment) {
        case ExperimentKind::toy_erf: return gen_linear_toy(d.n, d.slope, d.noise_std, d.seed);
        case ExperimentKind::sine_mlp: return gen_sine(d.n, d.freq, d.noise_std, d.seed, d.source_noise_std);
        case ExperimentKind::moons_logistic: return gen_moons(d.n, d.noise_std, d.seed);
        case ExperimentKind::synthetic_lq: {
            const auto p = LinearQuadraticProblem::alternating(d.mu, d.n, d.spread);
            Dataset out;
            out.seed = d.seed;
            for (std::size_t j = 0; j < d.n; ++j) {
                out.inputs.push_back(static_cast<double>(j));
                out.targets.push_back(p.offsets()[j]);
            }
            return out;
        }
    }
    throw ConfigError("unknown experiment");
}

/// Everything a run needs besides the optimizer settings.
struct ExperimentSetup {
    Dataset data;
    std::unique_ptr<HomotopyProblem> problem;
    /// Trace metric at the target (lambda = 1).
    std::function<double(const ParamVector&)> metric;
    std::string metric_name;
    std::optional<double> fstar;
    /// Initial iterate for a repeat, given that repeat's stream seed.
    std::function<ParamVector(std::uint64_t)> init;
};

inline ExperimentSetup build_setup(const ExperimentConfig& c) {
    validate(c);
    ExperimentSetup s;
    s.data = make_dataset(c);
    const std::size_t n = s.data.size();

    auto fixed_w0 = [&](std::size_t dim) {
        if (c.w0 && c.w0->size() != dim)
            throw ConfigError("w0: expected " + std::to_string(dim) + " entries, got " + std::to_string(c.w0->size()));
        ParamVector w0 = c.w0 ? ParamVector(*c.w0) : ParamVector(dim, 0.0);
        s.init = [w0](std::uint64_t) { return w0; };
        return w0;
    };

    switch (c.experiment) {
        case ExperimentKind::toy_erf: {
            const ParamVector w0 = fixed_w0(1);
            const auto xs = s.data.column(0);
            s.problem = std::make_unique<ErfRegressionProblem>(xs, s.data.targets, linear_source_labels(xs, w0[0]));
            s.fstar = estimate_fstar(*s.problem, 1.0, GridSearch{}).value;
            break;
        }
        case ExperimentKind::sine_mlp: {
            s.problem =
                std::make_unique<MlpRegressionProblem>(s.data.column(0), s.data.targets, *s.data.source_targets);
            if (c.w0) {
                fixed_w0(MlpRegressionProblem::param_count);
            } else {
                s.init = [](std::uint64_t seed) {
                    return mlp_initial_parameters(derive_seed(seed, stream_tag::model_init));
                };
            }
            break;
        }
        case ExperimentKind::moons_logistic: {
            std::vector<CubicLogisticProblem::Point> pts(n);
            for (std::size_t j = 0; j < n; ++j) pts[j] = {s.data.x(j, 0), s.data.x(j, 1)};
            auto problem = std::make_unique<CubicLogisticProblem>(std::move(pts), s.data.targets);
            const CubicLogisticProblem* raw = problem.get();
            s.metric = [raw](const ParamVector& w) { return raw->classification_error(w, 1.0); };
            s.metric_name = "training_error";
            s.problem = std::move(problem);
            fixed_w0(CubicLogisticProblem::param_count);
            break;
        }
        case ExperimentKind::synthetic_lq: {
            s.problem = std::make_unique<LinearQuadraticProblem>(
                LinearQuadraticProblem::alternating(c.data.mu, c.data.n, c.data.spread));
            s.fstar = 0.0;
            fixed_w0(1);
            break;
        }
    }
    if (!s.metric) {
        const HomotopyProblem* raw = s.problem.get();
        s.metric = [raw](const ParamVector& w) { return raw->objective(w, 1.0); };
        s.metric_name = "target_objective";
    }
    return s;
}

}  // namespace hsgd::harness
