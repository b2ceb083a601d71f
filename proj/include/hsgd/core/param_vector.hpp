#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <numeric>
#include <span>
#include <vector>

#include "hsgd/core/errors.hpp"

namespace hsgd {

/// Dense vector of optimization variables. The dimension is fixed at
/// construction; arithmetic between vectors of different dimension throws.
class ParamVector {
public:
    ParamVector() = default;
    explicit ParamVector(std::size_t dim, double fill = 0.0) : values_(dim, fill) {}
    ParamVector(std::initializer_list<double> init) : values_(init) {}
    explicit ParamVector(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t i) noexcept { return values_[i]; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<double> span() noexcept { return values_; }
    std::span<const double> span() const noexcept { return values_; }
    const std::vector<double>& values() const noexcept { return values_; }

    auto begin() noexcept { return values_.begin(); }
    auto end() noexcept { return values_.end(); }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

    void fill(double v) { std::fill(values_.begin(), values_.end(), v); }

    // this += a * x
    ParamVector& axpy(double a, const ParamVector& x) {
        require_same_size(x);
        for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += a * x.values_[i];
        return *this;
    }

    ParamVector& operator+=(const ParamVector& x) { return axpy(1.0, x); }
    ParamVector& operator-=(const ParamVector& x) { return axpy(-1.0, x); }
    ParamVector& operator*=(double s) {
        for (double& v : values_) v *= s;
        return *this;
    }

    friend ParamVector operator+(ParamVector a, const ParamVector& b) { return a += b; }
    friend ParamVector operator-(ParamVector a, const ParamVector& b) { return a -= b; }
    friend ParamVector operator*(double s, ParamVector a) { return a *= s; }

    friend bool operator==(const ParamVector&, const ParamVector&) = default;

    double dot(const ParamVector& x) const {
        require_same_size(x);
        return std::inner_product(values_.begin(), values_.end(), x.values_.begin(), 0.0);
    }
    double squared_norm() const { return dot(*this); }
    double norm() const { return std::sqrt(squared_norm()); }

    bool all_finite() const noexcept {
        return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
    }

private:
    void require_same_size(const ParamVector& x) const {
        if (x.size() != size()) throw ConfigError("ParamVector dimension mismatch");
    }

    std::vector<double> values_;
};

}  // namespace hsgd
