#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace hsgd {

// Root of every error the library throws.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid user configuration (bad sizes, n = 0, M > N, ...).
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Input data violates a contract (labels outside {0,1}, ...).
class DataError : public Error {
public:
    using Error::Error;
};

// A Monte-Carlo or search estimator could not produce a value.
class EstimationError : public Error {
public:
    using Error::Error;
};

// A theory calculator was asked for a value outside its feasibility region.
class InfeasibleError : public Error {
public:
    using Error::Error;
};

// A gradient or iterate became NaN/Inf. Carries the step index and, when
// raised from inside a homotopy run, the outer iteration and lambda.
class NonFiniteError : public Error {
public:
    NonFiniteError(std::size_t step, const std::string& what)
        : Error("non-finite " + what + " at SGD step " + std::to_string(step)), step_(step) {}

    NonFiniteError(const NonFiniteError& inner, std::size_t homotopy_iteration, double lambda)
        : Error(std::string(inner.what()) + " (homotopy iteration " +
                std::to_string(homotopy_iteration) + ", lambda " + std::to_string(lambda) + ")"),
          step_(inner.step_),
          homotopy_iteration_(homotopy_iteration),
          lambda_(lambda),
          annotated_(true) {}

    std::size_t step() const noexcept { return step_; }
    std::size_t homotopy_iteration() const noexcept { return homotopy_iteration_; }
    double lambda() const noexcept { return lambda_; }
    bool has_homotopy_context() const noexcept { return annotated_; }

private:
    std::size_t step_ = 0;
    std::size_t homotopy_iteration_ = 0;
    double lambda_ = 0.0;
    bool annotated_ = false;
};

}  // namespace hsgd
