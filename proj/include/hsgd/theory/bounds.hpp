#pragma once

// Closed-form bounds for constant-step SGD under an expected PL condition
// and for its homotopy extension. Logarithms are natural; log_rho(x) is
// computed as ln(x) / ln(rho) and ceilings are applied outermost.

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hsgd/core/errors.hpp"

namespace hsgd::theory {

inline double log_base(double base, double x) { return std::log(x) / std::log(base); }

inline double noise_floor(double sigma2, double mu) {
    if (!(mu > 0.0)) throw DomainError("mu must be positive");
    return sigma2 / (2.0 * mu);
}

/// rho^t * eps_init + sigma2 / (2 mu)
inline double sgd_gap_bound(double t, double rho, double eps_init, double sigma2, double mu) {
    if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("sgd_gap_bound: rho must lie in [0, 1)");
    if (!(eps_init >= 0.0)) throw DomainError("sgd_gap_bound: initial gap must be nonnegative");
    return std::pow(rho, t) * eps_init + noise_floor(sigma2, mu);
}

/// Smallest inner iteration count for r-tracking:
/// ceil(log_rho(1 - sigma2 / (2 mu r))).
inline std::int64_t kmax_tracking(double rho, double sigma2, double mu, double r) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("kmax_tracking: rho must lie in (0, 1)");
    const double floor = noise_floor(sigma2, mu);
    if (!(r > floor)) throw InfeasibleError("kmax_tracking: target radius inside the noise floor");
    return static_cast<std::int64_t>(std::ceil(log_base(rho, 1.0 - floor / r)));
}

/// Inner iterations that bring a warm start inside B back to
/// B - (delta + gamma) eps: ceil(log_rho(1 - (2 mu (delta+gamma) eps + sigma2) / (2 mu B))).
inline std::int64_t kmax_warmstart(double rho, double mu, double delta, double gamma, double epsilon, double sigma2,
                                   double B) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("kmax_warmstart: rho must lie in (0, 1)");
    const double floor = noise_floor(sigma2, mu);
    const double dg = delta + gamma;
    if (!(epsilon >= 0.0)) throw DomainError("kmax_warmstart: epsilon must be nonnegative");
    if (!(dg > 0.0)) throw DomainError("kmax_warmstart: delta + gamma must be positive");
    if (!(epsilon < (B - floor) / dg))
        throw InfeasibleError("kmax_warmstart: epsilon at or above (B - sigma2/(2 mu)) / (delta + gamma)");
    const double arg = 1.0 - (2.0 * mu * dg * epsilon + sigma2) / (2.0 * mu * B);
    return static_cast<std::int64_t>(std::ceil(log_base(rho, arg)));
}

struct TrackingEpsilons {
    double eps1 = 0.0;
    double eps2 = 0.0;
    double eps_tilde = 0.0;
    bool feasible = true;
    std::string reason;
};

/// eps1 = (B - r)/(delta+gamma); eps2 = ((1 - rho^k) r - sigma2/(2 mu)) / (rho^k (delta+gamma));
/// eps_tilde = min(eps1, eps2). A negative eps2 (k below kmax_tracking) or
/// r > B is reported as infeasible; the raw values are still returned.
inline TrackingEpsilons tracking_epsilons(double rho, double k, double sigma2, double mu, double r, double B,
                                          double delta, double gamma) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("tracking_epsilons: rho must lie in (0, 1)");
    const double dg = delta + gamma;
    if (!(dg > 0.0)) throw DomainError("tracking_epsilons: delta + gamma must be positive");
    const double rk = std::pow(rho, k);
    TrackingEpsilons out;
    out.eps1 = (B - r) / dg;
    out.eps2 = ((1.0 - rk) * r - noise_floor(sigma2, mu)) / (rk * dg);
    out.eps_tilde = std::min(out.eps1, out.eps2);
    if (r > B) {
        out.feasible = false;
        out.reason = "r exceeds B";
    } else if (out.eps2 < 0.0) {
        out.feasible = false;
        out.reason = "k below kmax_tracking (eps2 < 0)";
    }
    return out;
}

/// rho_tilde^i eps0 + sigma2/(2 mu) * (1 - rho_tilde^i) / (1 - rho_tilde)
inline double hsgd_gap_bound(double i, double rho_tilde, double epsilon0, double sigma2, double mu) {
    if (!(rho_tilde > 0.0 && rho_tilde < 1.0)) throw DomainError("hsgd_gap_bound: rho_tilde must lie in (0, 1)");
    const double p = std::pow(rho_tilde, i);
    return p * epsilon0 + noise_floor(sigma2, mu) * (1.0 - p) / (1.0 - rho_tilde);
}

/// gamma = delta + kappa1 * kappa2
inline double gamma_from_kappas(double delta, double kappa1, double kappa2) {
    if (delta < 0.0 || kappa1 < 0.0 || kappa2 < 0.0) throw DomainError("gamma_from_kappas: inputs must be nonnegative");
    return delta + kappa1 * kappa2;
}

/// One interval check of a feasibility report.
struct FeasibilityCheck {
    std::string key;
    std::string condition;
    double value = 0.0;
    std::optional<double> lower;
    std::optional<double> upper;
    bool pass = false;
    bool gating = true;  // informational checks do not affect overall feasibility
};

struct ScheduleDesign {
    double c_rho_tilde = 0.0;
    bool first_branch = false;
    double branch_threshold = 0.0;        // log_rho(rho_tilde) - log_rho(1 + (delta+gamma)/eps0)
    double eta_min = 0.0;                 // -ln(C rho_tilde); +inf when C = 0
    double eta_min_main_text = 0.0;       // ln(C rho_tilde)
    bool eta_unbounded = false;
    std::int64_t k_min = 0;               // ceil(log_rho(rho_tilde))
    double eps1 = 0.0;
    std::vector<FeasibilityCheck> checks;

    bool feasible() const {
        for (const auto& c : checks)
            if (c.gating && !c.pass) return false;
        return true;
    }
};

/// Exponential-schedule design for the linear-rate regime.
///
/// C = 1 if k >= log_rho(rho_tilde) - log_rho(1 + (delta+gamma)/eps0), else
/// (rho_tilde - rho^k)/rho^k * eps0/(delta+gamma). The decay rate must satisfy
/// eta >= -ln(C rho_tilde). Feasibility of rho_tilde is checked as
/// rho^k <= rho_tilde <= 1 - sigma2/(2 mu B), the range on which both
/// sigma2/(2 mu (1 - rho_tilde)) <= r <= B and k >= log_rho(rho_tilde) can hold;
/// the open interval (1 - sigma2/(2 mu B), 1) is listed as an informational
/// check because it is empty whenever the r-range is non-empty.
inline ScheduleDesign linear_rate_schedule_params(double rho, double k, double rho_tilde, double epsilon0, double delta,
                                                  double gamma, double sigma2, double mu, double B, double r) {
    if (!(rho > 0.0 && rho < 1.0)) throw DomainError("linear_rate_schedule_params: rho must lie in (0, 1)");
    if (!(rho_tilde > 0.0 && rho_tilde < 1.0))
        throw DomainError("linear_rate_schedule_params: rho_tilde must lie in (0, 1)");
    const double dg = delta + gamma;
    if (!(dg > 0.0)) throw DomainError("linear_rate_schedule_params: delta + gamma must be positive");
    if (!(epsilon0 > 0.0)) throw DomainError("linear_rate_schedule_params: epsilon0 must be positive");
    const double floor = noise_floor(sigma2, mu);

    ScheduleDesign d;
    const double rk = std::pow(rho, k);
    d.branch_threshold = log_base(rho, rho_tilde) - log_base(rho, 1.0 + dg / epsilon0);
    d.first_branch = k >= d.branch_threshold;
    d.c_rho_tilde = d.first_branch ? 1.0 : (rho_tilde - rk) / rk * epsilon0 / dg;
    const double prod = d.c_rho_tilde * rho_tilde;
    if (prod > 0.0) {
        d.eta_min = -std::log(prod);
        d.eta_min_main_text = std::log(prod);
    } else {
        d.eta_unbounded = true;
        d.eta_min = std::numeric_limits<double>::infinity();
        d.eta_min_main_text = -std::numeric_limits<double>::infinity();
    }
    d.k_min = static_cast<std::int64_t>(std::ceil(log_base(rho, rho_tilde)));
    d.eps1 = (B - r) / dg;

    const double rt_upper = 1.0 - floor / B;
    d.checks.push_back({"k_ge_log_rho_rho_tilde", "k >= log_rho(rho_tilde)", k, log_base(rho, rho_tilde),
                        std::nullopt, k >= log_base(rho, rho_tilde), true});
    d.checks.push_back({"rho_tilde_upper", "rho_tilde <= 1 - sigma2/(2 mu B)", rho_tilde, std::nullopt, rt_upper,
                        rho_tilde <= rt_upper, true});
    d.checks.push_back({"rho_tilde_stated_interval", "rho_tilde in (1 - sigma2/(2 mu B), 1) [as stated; informational]",
                        rho_tilde, rt_upper, 1.0, rho_tilde > rt_upper && rho_tilde < 1.0, false});
    d.checks.push_back({"r_lower", "sigma2/(2 mu (1 - rho_tilde)) <= r", r, floor / (1.0 - rho_tilde), std::nullopt,
                        floor / (1.0 - rho_tilde) <= r, true});
    d.checks.push_back({"r_upper", "r <= B", r, std::nullopt, B, r <= B, true});
    d.checks.push_back({"epsilon0_le_r", "epsilon0 <= r", epsilon0, std::nullopt, r, epsilon0 <= r, true});
    d.checks.push_back({"c_positive", "C_rho_tilde > 0 (eta bounded)", d.c_rho_tilde, 0.0, std::nullopt,
                        !d.eta_unbounded, true});
    return d;
}

/// lambda reached after n increments Delta lambda_{i+1} = min(e^{-eta i}, eps1), i = 0..n-1.
inline double achievable_lambda(double eta, double eps1, std::size_t n) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += std::min(std::exp(-eta * static_cast<double>(i)), eps1);
    return total;
}

}  // namespace hsgd::theory
