#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/param_vector.hpp"
#include "hsgd/core/rng.hpp"
#include "hsgd/problems/problem.hpp"

namespace hsgd {

namespace detail {

// Uniform point in the d-ball of the given radius around `center`.
inline ParamVector sample_ball(const ParamVector& center, double radius, Rng& rng) {
    const std::size_t d = center.size();
    ParamVector dir(d);
    double norm2 = 0.0;
    do {
        norm2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            dir[i] = rng.gaussian();
            norm2 += dir[i] * dir[i];
        }
    } while (norm2 == 0.0);
    const double r = radius * std::pow(rng.next_double(), 1.0 / static_cast<double>(d));
    ParamVector w = center;
    w.axpy(r / std::sqrt(norm2), dir);
    return w;
}

inline double binomial(std::size_t n, std::size_t k) {
    if (k > n) return 0.0;
    k = std::min(k, n - k);
    double c = 1.0;
    for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
    return c;
}

// Calls fn(indices) for every k-subset of {0..n-1} in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        fn(std::span<const std::size_t>(idx));
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace detail

/// Smoothness estimate: the largest ||grad f(w1) - grad f(w2)|| / ||w1 - w2||
/// over `num_pairs` pairs drawn uniformly from the ball of `radius` around
/// `center` (origin by default). A lower bound on L. Coincident pairs are
/// skipped. Pairs are drawn in sequence, so a larger `num_pairs` with the
/// same stream extends the earlier sample.
inline double estimate_L(const HomotopyProblem& problem, double lambda, std::size_t num_pairs, double radius,
                         Rng& rng, std::optional<ParamVector> center = std::nullopt) {
    if (num_pairs == 0) throw ConfigError("estimate_L: num_pairs must be at least 1");
    if (!(radius > 0.0)) throw ConfigError("estimate_L: radius must be positive");
    const ParamVector c = center.value_or(ParamVector(problem.dimension()));
    double best = 0.0;
    bool any = false;
    for (std::size_t p = 0; p < num_pairs; ++p) {
        const ParamVector w1 = detail::sample_ball(c, radius, rng);
        const ParamVector w2 = detail::sample_ball(c, radius, rng);
        const double dw = (w1 - w2).norm();
        if (dw == 0.0) continue;
        const double dg = (problem.gradient(w1, lambda) - problem.gradient(w2, lambda)).norm();
        best = std::max(best, dg / dw);
        any = true;
    }
    if (!any) throw EstimationError("estimate_L: every sampled pair was coincident");
    return best;
}

inline constexpr double optimum_gap_tolerance = 1e-12;

/// Pointwise PL modulus ||grad f(w)||^2 / (2 (f(w) - f*)).
inline double estimate_mu(const HomotopyProblem& problem, double lambda, const ParamVector& w, double fstar) {
    const double gap = problem.objective(w, lambda) - fstar;
    if (!(gap > optimum_gap_tolerance))
        throw EstimationError("estimate_mu: gap " + std::to_string(gap) + " is at or below the optimum tolerance");
    return problem.gradient(w, lambda).squared_norm() / (2.0 * gap);
}

/// Oracle variance bound: the maximum over `w_samples` of the mean
/// ||g(w, xi) - grad f(w)||^2 over size-M minibatches. When C(N, M) <= draws
/// every minibatch is enumerated once and the value is exact; otherwise
/// `draws` minibatches are sampled uniformly without replacement.
inline double estimate_sigma2(const HomotopyProblem& problem, double lambda, std::span<const ParamVector> w_samples,
                              std::size_t minibatch_size, std::size_t draws, Rng& rng) {
    if (draws < 2) throw ConfigError("estimate_sigma2: draws must be at least 2");
    const std::size_t n = problem.sample_count();
    if (minibatch_size == 0 || minibatch_size > n) throw ConfigError("estimate_sigma2: minibatch size out of range");
    if (w_samples.empty()) throw ConfigError("estimate_sigma2: no parameter samples");

    const bool exhaustive = detail::binomial(n, minibatch_size) <= static_cast<double>(draws);
    MinibatchSampler sampler(n);
    ParamVector g;
    double worst = 0.0;
    for (const ParamVector& w : w_samples) {
        const ParamVector full = problem.gradient(w, lambda);
        double sum = 0.0;
        std::size_t count = 0;
        auto accumulate = [&](std::span<const std::size_t> batch) {
            problem.minibatch_value_and_gradient(w, lambda, batch, g);
            sum += (g - full).squared_norm();
            ++count;
        };
        if (exhaustive) {
            detail::for_each_subset(n, minibatch_size, accumulate);
        } else {
            for (std::size_t k = 0; k < draws; ++k) accumulate(sampler.draw(rng, minibatch_size));
        }
        worst = std::max(worst, sum / static_cast<double>(count));
    }
    return worst;
}

/// 1-D grid search over [lo, hi] with spacing `step`.
struct GridSearch {
    double lo = -10.0;
    double hi = 10.0;
    double step = 1e-4;
};

/// Best terminal value of full-batch gradient descent from `restarts`
/// Gaussian starting points (mean `center`, per-coordinate `spread`).
struct MultiStartDescent {
    std::size_t restarts = 10;
    std::size_t steps = 2000;
    double step_size = 0.1;
    double spread = 1.0;
    std::optional<ParamVector> center;
    std::vector<ParamVector> starts;  // used before random starts when given
    std::uint64_t seed = 0;
};

using FstarSearch = std::variant<GridSearch, MultiStartDescent>;

struct FstarEstimate {
    double value = 0.0;
    ParamVector argmin;
    bool upper_bound_only = false;  // set for local-search results on non-convex problems
};

/// Estimate of f*(lambda). Grid search refines the best grid point by
/// bisection on the sign of the derivative between its neighbours.
inline FstarEstimate estimate_fstar(const HomotopyProblem& problem, double lambda, const FstarSearch& search) {
    if (const auto* grid = std::get_if<GridSearch>(&search)) {
        if (problem.dimension() != 1) throw ConfigError("estimate_fstar: grid search needs a 1-D problem");
        if (!(grid->step > 0.0) || !(grid->hi >= grid->lo)) throw ConfigError("estimate_fstar: empty grid");
        const auto count = static_cast<std::size_t>(std::floor((grid->hi - grid->lo) / grid->step + 1e-9)) + 1;
        if (count == 0) throw ConfigError("estimate_fstar: empty grid");
        auto at = [&](std::size_t i) { return grid->lo + grid->step * static_cast<double>(i); };
        std::size_t best_i = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < count; ++i) {
            const double v = problem.objective(ParamVector{at(i)}, lambda);
            if (v < best) {
                best = v;
                best_i = i;
            }
        }
        FstarEstimate out{best, ParamVector{at(best_i)}, false};
        const double a0 = best_i > 0 ? at(best_i - 1) : at(best_i);
        const double b0 = best_i + 1 < count ? at(best_i + 1) : at(best_i);
        auto slope = [&](double w) { return problem.gradient(ParamVector{w}, lambda)[0]; };
        double a = a0, b = b0;
        if (a < b && slope(a) < 0.0 && slope(b) > 0.0) {
            for (int it = 0; it < 200 && b - a > 0.0; ++it) {
                const double m = 0.5 * (a + b);
                if (m == a || m == b) break;
                (slope(m) > 0.0 ? b : a) = m;
            }
            for (double w : {a, b, 0.5 * (a + b)}) {
                const double v = problem.objective(ParamVector{w}, lambda);
                if (v < out.value) out = FstarEstimate{v, ParamVector{w}, false};
            }
        }
        return out;
    }

    const auto& ms = std::get<MultiStartDescent>(search);
    if (ms.restarts == 0 && ms.starts.empty()) throw ConfigError("estimate_fstar: no restarts requested");
    Rng rng(ms.seed);
    const ParamVector c = ms.center.value_or(ParamVector(problem.dimension()));
    FstarEstimate out{std::numeric_limits<double>::infinity(), c, true};
    auto descend = [&](ParamVector w) {
        ParamVector g;
        for (std::size_t t = 0; t < ms.steps; ++t) {
            problem.minibatch_value_and_gradient(w, lambda, problem.all_indices(), g);
            w.axpy(-ms.step_size, g);
            if (!w.all_finite()) return;
        }
        const double v = problem.objective(w, lambda);
        if (std::isfinite(v) && v < out.value) out = FstarEstimate{v, w, true};
    };
    for (const auto& s : ms.starts) descend(s);
    for (std::size_t r = 0; r < ms.restarts; ++r) {
        ParamVector w = c;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += ms.spread * rng.gaussian();
        descend(std::move(w));
    }
    if (!std::isfinite(out.value)) throw EstimationError("estimate_fstar: every restart diverged");
    return out;
}

struct GradientCheckEntry {
    std::size_t coord = 0;
    double analytic = 0.0;
    double numeric = 0.0;
    double rel_error = 0.0;
};

struct GradientCheckReport {
    double max_rel_error = 0.0;
    std::vector<GradientCheckEntry> entries;
};

/// Central differences on the full-batch objective for the listed
/// coordinates (all coordinates when empty). Relative error uses the
/// denominator max(1, |analytic|).
inline GradientCheckReport check_gradient(const HomotopyProblem& problem, double lambda, const ParamVector& w,
                                          std::span<const std::size_t> coords = {}, double fd_step = 1e-6) {
    if (!(fd_step > 0.0)) throw ConfigError("check_gradient: fd_step must be positive");
    const ParamVector g = problem.gradient(w, lambda);
    std::vector<std::size_t> all;
    if (coords.empty()) {
        all.resize(w.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
        coords = all;
    }
    GradientCheckReport report;
    ParamVector probe = w;
    for (std::size_t i : coords) {
        if (i >= w.size()) throw ConfigError("check_gradient: coordinate out of range");
        probe[i] = w[i] + fd_step;
        const double up = problem.objective(probe, lambda);
        probe[i] = w[i] - fd_step;
        const double down = problem.objective(probe, lambda);
        probe[i] = w[i];
        const double numeric = (up - down) / (2.0 * fd_step);
        const double rel = std::abs(numeric - g[i]) / std::max(1.0, std::abs(g[i]));
        report.entries.push_back({i, g[i], numeric, rel});
        report.max_rel_error = std::max(report.max_rel_error, rel);
    }
    return report;
}

struct PlProbeResult {
    double ratio = 0.0;          // mu_tilde
    double mean_sq_grad = 0.0;   // E ||grad f(w)||^2
    double mean_gap = 0.0;       // E f(w) - f*
};

/// Gaussian sampler w ~ N(mean, stddev^2 I).
struct GaussianSampler {
    ParamVector mean;
    double stddev = 1.0;
};

/// Expected-PL ratio E||grad f||^2 / (2 (E f - f*)) under the sampler.
inline PlProbeResult expected_pl_probe(const HomotopyProblem& problem, double lambda, const GaussianSampler& sampler,
                                       std::size_t draws, double fstar, Rng& rng) {
    if (draws < 100) throw ConfigError("expected_pl_probe: at least 100 draws required");
    ParamVector mean = sampler.mean.size() ? sampler.mean : ParamVector(problem.dimension());
    double sum_g2 = 0.0, sum_f = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
        ParamVector w = mean;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += sampler.stddev * rng.gaussian();
        sum_g2 += problem.gradient(w, lambda).squared_norm();
        sum_f += problem.objective(w, lambda);
    }
    PlProbeResult out;
    out.mean_sq_grad = sum_g2 / static_cast<double>(draws);
    out.mean_gap = sum_f / static_cast<double>(draws) - fstar;
    if (!(out.mean_gap > 0.0)) throw EstimationError("expected_pl_probe: sampler concentrated at the optimum");
    out.ratio = out.mean_sq_grad / (2.0 * out.mean_gap);
    return out;
}

/// Lambda-Lipschitz witness: max |f(w, l1) - f(w, l2)| / |l1 - l2| over
/// `probes` random triples with w ~ sampler and l1, l2 ~ U[0, 1].
inline double estimate_delta(const HomotopyProblem& problem, const GaussianSampler& sampler, std::size_t probes,
                             Rng& rng) {
    if (probes == 0) throw ConfigError("estimate_delta: probes must be at least 1");
    ParamVector mean = sampler.mean.size() ? sampler.mean : ParamVector(problem.dimension());
    double best = 0.0;
    for (std::size_t k = 0; k < probes; ++k) {
        ParamVector w = mean;
        for (std::size_t i = 0; i < w.size(); ++i) w[i] += sampler.stddev * rng.gaussian();
        const double l1 = rng.next_double();
        const double l2 = rng.next_double();
        if (l1 == l2) continue;
        best = std::max(best, std::abs(problem.objective(w, l1) - problem.objective(w, l2)) / std::abs(l1 - l2));
    }
    return best;
}

struct MuSample {
    double w = 0.0;
    double mu = 0.0;
};

/// mu_hat(w) over a 1-D grid; points within the optimum tolerance are skipped.
inline std::vector<MuSample> mu_profile(const HomotopyProblem& problem, double lambda, double lo, double hi,
                                        double step, double fstar) {
    if (problem.dimension() != 1) throw ConfigError("mu_profile: 1-D problems only");
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("mu_profile: empty grid");
    std::vector<MuSample> out;
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) {
        const double w = lo + step * static_cast<double>(i);
        const ParamVector p{w};
        if (problem.objective(p, lambda) - fstar <= optimum_gap_tolerance) continue;
        out.push_back({w, estimate_mu(problem, lambda, p, fstar)});
    }
    return out;
}

}  // namespace hsgd
