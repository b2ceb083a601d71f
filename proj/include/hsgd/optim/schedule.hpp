#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hsgd/core/errors.hpp"

namespace hsgd {

enum class ScheduleKind { constant, exponential, explicit_list };

inline std::string_view to_string(ScheduleKind k) {
    switch (k) {
        case ScheduleKind::constant: return "constant";
        case ScheduleKind::exponential: return "exponential";
        case ScheduleKind::explicit_list: return "explicit";
    }
    return "unknown";
}

inline ScheduleKind parse_schedule_kind(std::string_view s) {
    if (s == "constant") return ScheduleKind::constant;
    if (s == "exponential") return ScheduleKind::exponential;
    if (s == "explicit") return ScheduleKind::explicit_list;
    throw ConfigError("unknown schedule kind '" + std::string(s) + "'");
}

/// Homotopy increments h(1..n): every h(i) in (0, 1] and sum h(i) = 1.
class Schedule {
public:
    ScheduleKind kind() const noexcept { return kind_; }
    std::size_t size() const noexcept { return h_.size(); }
    double eta() const noexcept { return eta_; }

    /// h(i) for i in 1..n.
    double increment(std::size_t i) const { return h_.at(i - 1); }
    const std::vector<double>& increments() const noexcept { return h_; }

    /// lambda_0..lambda_n with lambda_i = lambda_{i-1} + h(i), capped at 1.
    std::vector<double> lambdas() const {
        std::vector<double> out(h_.size() + 1, 0.0);
        for (std::size_t i = 1; i <= h_.size(); ++i) out[i] = std::min(1.0, out[i - 1] + h_[i - 1]);
        return out;
    }

    /// Warnings for increments that exceed the unnormalized exponential
    /// bound e^{-eta (i-1)} or an optional cap eps1.
    std::vector<std::string> bound_warnings(std::optional<double> eps1 = std::nullopt) const {
        std::vector<std::string> out;
        for (std::size_t i = 1; i <= h_.size(); ++i) {
            const double h = h_[i - 1];
            if (kind_ == ScheduleKind::exponential) {
                const double raw = std::exp(-eta_ * static_cast<double>(i - 1));
                if (h > raw * (1.0 + 1e-12))
                    out.push_back("h(" + std::to_string(i) + ") = " + std::to_string(h) +
                                  " exceeds exp(-eta*(i-1)) = " + std::to_string(raw));
            }
            if (eps1 && h > *eps1)
                out.push_back("h(" + std::to_string(i) + ") = " + std::to_string(h) + " exceeds eps1 = " +
                              std::to_string(*eps1));
        }
        return out;
    }

    friend Schedule make_schedule(ScheduleKind, std::size_t, std::optional<double>,
                                  const std::vector<double>*);

private:
    ScheduleKind kind_ = ScheduleKind::constant;
    double eta_ = 0.0;
    std::vector<double> h_;
};

/// constant:    h(i) = 1/n
/// exponential: h(i) = e^{-eta i} / sum_{j=1..n} e^{-eta j}
/// explicit:    the given positive weights divided by their sum
inline Schedule make_schedule(ScheduleKind kind, std::size_t n, std::optional<double> eta = std::nullopt,
                              const std::vector<double>* explicit_weights = nullptr) {
    Schedule s;
    s.kind_ = kind;
    switch (kind) {
        case ScheduleKind::constant:
            if (n == 0) throw ConfigError("schedule: n must be at least 1");
            s.h_.assign(n, 1.0 / static_cast<double>(n));
            break;
        case ScheduleKind::exponential: {
            if (n == 0) throw ConfigError("schedule: n must be at least 1");
            const double e = eta.value_or(0.0);
            if (!(e >= 0.0) || !std::isfinite(e)) throw ConfigError("schedule: eta must be finite and nonnegative");
            s.eta_ = e;
            // Weights relative to the first one keep h(1) well scaled for
            // large eta; the ratio h(i+1)/h(i) is e^{-eta} either way.
            s.h_.resize(n);
            double z = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s.h_[i] = std::exp(-e * static_cast<double>(i));
                z += s.h_[i];
            }
            for (double& h : s.h_) h /= z;
            if (!std::isnormal(s.h_.back()))
                throw ConfigError("schedule: eta * (n - 1) too large, the last increments underflow");
            break;
        }
        case ScheduleKind::explicit_list: {
            if (explicit_weights == nullptr || explicit_weights->empty())
                throw ConfigError("schedule: explicit kind needs a non-empty list");
            if (n != 0 && n != explicit_weights->size())
                throw ConfigError("schedule: n does not match explicit list length");
            double z = 0.0;
            for (double v : *explicit_weights) {
                if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("schedule: explicit entries must be positive");
                z += v;
            }
            s.h_.reserve(explicit_weights->size());
            for (double v : *explicit_weights) s.h_.push_back(v / z);
            break;
        }
    }
    return s;
}

}  // namespace hsgd
