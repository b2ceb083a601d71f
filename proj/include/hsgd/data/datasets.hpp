#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/rng.hpp"

namespace hsgd {

/// Row-major samples with 1 or 2 input features. `source_targets` is set
/// only by generators that also emit homotopy source labels.
struct Dataset {
    std::size_t input_dim = 1;
    std::vector<double> inputs;  // N * input_dim
    std::vector<double> targets;
    std::optional<std::vector<double>> source_targets;
    std::uint64_t seed = 0;

    std::size_t size() const noexcept { return targets.size(); }
    double x(std::size_t j, std::size_t k = 0) const { return inputs[j * input_dim + k]; }

    std::vector<double> column(std::size_t k) const {
        std::vector<double> out(size());
        for (std::size_t j = 0; j < size(); ++j) out[j] = x(j, k);
        return out;
    }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// x_j ~ U[-1, 1], y_j = slope x_j + noise_std * e_j with e_j ~ N(0, 1).
/// Draw order per sample: x_j, then e_j.
inline Dataset gen_linear_toy(std::size_t n = 100, double slope = 3.0, double noise_std = 1.0,
                              std::uint64_t seed = 0) {
    if (n == 0) throw ConfigError("gen_linear_toy: N must be at least 1");
    if (!(noise_std >= 0.0)) throw ConfigError("gen_linear_toy: noise_std must be nonnegative");
    Rng rng(seed);
    Dataset d;
    d.seed = seed;
    d.inputs.resize(n);
    d.targets.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = rng.uniform(-1.0, 1.0);
        const double e = rng.gaussian();
        d.inputs[j] = x;
        d.targets[j] = slope * x + noise_std * e;
    }
    return d;
}

/// Sine regression data: x_j ~ U[-1, 1], y_j = sin(freq x_j) + noise_std e_j.
/// Source labels x_j^2 + source_noise_std e'_j come from the sub-stream
/// derive_seed(seed, stream_tag::source_noise).
///
/// Defaults read N(0, 0.1) and N(0, 0.01) as variances: noise_std = sqrt(0.1),
/// source_noise_std = 0.1.
inline Dataset gen_sine(std::size_t n = 500, double freq = 10.0, double noise_std = std::sqrt(0.1),
                        std::uint64_t seed = 0, double source_noise_std = 0.1) {
    if (n == 0) throw ConfigError("gen_sine: N must be at least 1");
    if (!(noise_std >= 0.0) || !(source_noise_std >= 0.0))
        throw ConfigError("gen_sine: noise levels must be nonnegative");
    Rng rng(seed);
    Rng src(derive_seed(seed, stream_tag::source_noise));
    Dataset d;
    d.seed = seed;
    d.inputs.resize(n);
    d.targets.resize(n);
    std::vector<double> source(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = rng.uniform(-1.0, 1.0);
        const double e = rng.gaussian();
        d.inputs[j] = x;
        d.targets[j] = std::sin(freq * x) + noise_std * e;
        source[j] = x * x + source_noise_std * src.gaussian();
    }
    d.source_targets = std::move(source);
    return d;
}

/// Two interleaving half circles. Class 0: (cos t, sin t); class 1:
/// (1 - cos t, 0.5 - sin t); t equally spaced on [0, pi] within each class.
/// Class 0 rows come first. Gaussian noise is added to x1 then x2 of every
/// row in order.
inline Dataset gen_moons(std::size_t n = 1000, double noise_std = 0.1, std::uint64_t seed = 0) {
    if (n < 2 || n % 2 != 0) throw ConfigError("gen_moons: N must be even and at least 2");
    if (!(noise_std >= 0.0)) throw ConfigError("gen_moons: noise_std must be nonnegative");
    const std::size_t half = n / 2;
    Rng rng(seed);
    Dataset d;
    d.seed = seed;
    d.input_dim = 2;
    d.inputs.resize(2 * n);
    d.targets.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::size_t i = j % half;
        const double t = half > 1 ? std::numbers::pi * static_cast<double>(i) / static_cast<double>(half - 1) : 0.0;
        double x1, x2;
        if (j < half) {
            x1 = std::cos(t);
            x2 = std::sin(t);
        } else {
            x1 = 1.0 - std::cos(t);
            x2 = 0.5 - std::sin(t);
        }
        d.inputs[2 * j] = x1 + noise_std * rng.gaussian();
        d.inputs[2 * j + 1] = x2 + noise_std * rng.gaussian();
        d.targets[j] = j < half ? 0.0 : 1.0;
    }
    return d;
}

/// Decimal with 17 significant digits; round-trips every double.
inline std::string format_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// CSV: header `x1[,x2],y[,y_source]`, one row per sample, LF endings.
inline void write_csv(std::ostream& os, const Dataset& d) {
    os << "x1";
    if (d.input_dim == 2) os << ",x2";
    os << ",y";
    if (d.source_targets) os << ",y_source";
    os << '\n';
    for (std::size_t j = 0; j < d.size(); ++j) {
        for (std::size_t k = 0; k < d.input_dim; ++k) os << (k ? "," : "") << format_real(d.x(j, k));
        os << ',' << format_real(d.targets[j]);
        if (d.source_targets) os << ',' << format_real((*d.source_targets)[j]);
        os << '\n';
    }
}

}  // namespace hsgd
