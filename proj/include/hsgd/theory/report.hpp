#pragma once

#include <cmath>
#include <cstdio>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hsgd/theory/bounds.hpp"

namespace hsgd::theory {

/// Scalar landscape and algorithm constants. Everything is optional; each
/// check and derived value is produced only when its inputs are present.
struct TheoryConstants {
    std::optional<double> L, mu, sigma2, delta, gamma, B, r, alpha, rho_value, k, n;
    std::optional<double> rho_tilde, epsilon0, eta, epsilon, kappa1, kappa2;

    /// alpha defaults to 1/L.
    std::optional<double> step_size() const {
        if (alpha) return alpha;
        if (L && *L > 0.0) return 1.0 / *L;
        return std::nullopt;
    }

    /// rho as given, else 1 - alpha mu.
    std::optional<double> rho() const {
        if (rho_value) return rho_value;
        const auto a = step_size();
        if (a && mu) return 1.0 - *a * *mu;
        return std::nullopt;
    }

    /// gamma as given, else delta + kappa1 kappa2 when the kappas are given.
    std::optional<double> effective_gamma() const {
        if (gamma) return gamma;
        if (delta && kappa1 && kappa2) return gamma_from_kappas(*delta, *kappa1, *kappa2);
        return std::nullopt;
    }
};

struct TheoryReport {
    std::vector<FeasibilityCheck> checks;
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::string> notes;
    std::vector<double> gap_curve;  // hsgd_gap_bound(i) for i = 0..n

    bool feasible() const {
        for (const auto& c : checks)
            if (c.gating && !c.pass) return false;
        return true;
    }

    std::optional<double> value(const std::string& key) const {
        for (const auto& [k, v] : values)
            if (k == key) return v;
        return std::nullopt;
    }

    const FeasibilityCheck* check(const std::string& key) const {
        for (const auto& c : checks)
            if (c.key == key) return &c;
        return nullptr;
    }
};

inline TheoryReport evaluate(const TheoryConstants& c) {
    TheoryReport rep;
    auto add_check = [&](std::string key, std::string cond, double value, std::optional<double> lo,
                         std::optional<double> hi, bool pass, bool gating = true) {
        rep.checks.push_back({std::move(key), std::move(cond), value, lo, hi, pass, gating});
    };
    auto add_value = [&](std::string key, double v) { rep.values.emplace_back(std::move(key), v); };

    if (c.L) add_check("L_positive", "L > 0", *c.L, 0.0, std::nullopt, *c.L > 0.0);
    if (c.mu) add_check("mu_positive", "mu > 0", *c.mu, 0.0, std::nullopt, *c.mu > 0.0);
    if (c.sigma2) add_check("sigma2_nonnegative", "sigma2 >= 0", *c.sigma2, 0.0, std::nullopt, *c.sigma2 >= 0.0);
    if (c.alpha && c.L)
        add_check("alpha_le_inv_L", "alpha <= 1/L", *c.alpha, std::nullopt, 1.0 / *c.L, *c.alpha <= 1.0 / *c.L);

    const bool mu_ok = c.mu && *c.mu > 0.0;
    const auto rho = c.rho();
    const bool rho_ok = rho && *rho > 0.0 && *rho < 1.0;
    if (rho) {
        add_value("rho", *rho);
        add_check("rho_in_unit_interval", "0 < rho < 1", *rho, 0.0, 1.0, rho_ok);
    }

    std::optional<double> floor;
    if (mu_ok && c.sigma2) {
        floor = noise_floor(*c.sigma2, *c.mu);
        add_value("noise_floor", *floor);
    }
    if (floor && c.B) add_check("B_gt_noise_floor", "B > sigma2/(2 mu)", *c.B, *floor, std::nullopt, *c.B > *floor);
    if (floor && c.r) add_check("r_gt_noise_floor", "r > sigma2/(2 mu)", *c.r, *floor, std::nullopt, *c.r > *floor);
    if (c.r && c.B) add_check("r_le_B", "r <= B", *c.r, std::nullopt, *c.B, *c.r <= *c.B);

    if (rho_ok && floor && c.r && *c.r > *floor) {
        const auto km = kmax_tracking(*rho, *c.sigma2, *c.mu, *c.r);
        add_value("kmax_tracking", static_cast<double>(km));
        if (c.k) add_check("k_ge_kmax_tracking", "k >= kmax_tracking", *c.k, static_cast<double>(km), std::nullopt,
                           *c.k >= static_cast<double>(km));
    }

    const auto gamma = c.effective_gamma();
    if (gamma) add_value("gamma", *gamma);
    const bool dg_ok = c.delta && gamma && (*c.delta + *gamma) > 0.0;

    std::optional<double> eps_tilde;
    if (rho_ok && mu_ok && c.sigma2 && c.k && c.r && c.B && dg_ok) {
        const auto te = tracking_epsilons(*rho, *c.k, *c.sigma2, *c.mu, *c.r, *c.B, *c.delta, *gamma);
        add_value("eps1", te.eps1);
        add_value("eps2", te.eps2);
        add_value("eps_tilde", te.eps_tilde);
        add_check("tracking_feasible", "eps2 >= 0 and r <= B", te.eps_tilde, 0.0, std::nullopt, te.feasible);
        if (te.feasible) eps_tilde = te.eps_tilde;
    }

    if (rho_ok && mu_ok && c.sigma2 && c.B && dg_ok) {
        const double eps = c.epsilon ? *c.epsilon : eps_tilde.value_or(0.0);
        const double bound = (*c.B - noise_floor(*c.sigma2, *c.mu)) / (*c.delta + *gamma);
        const bool ok = eps >= 0.0 && eps < bound;
        add_check("warmstart_epsilon", "0 <= epsilon < (B - sigma2/(2 mu)) / (delta + gamma)", eps, 0.0, bound, ok);
        if (ok) {
            add_value("warmstart_epsilon", eps);
            add_value("kmax_warmstart",
                      static_cast<double>(kmax_warmstart(*rho, *c.mu, *c.delta, *gamma, eps, *c.sigma2, *c.B)));
        }
    }

    if (rho_ok && mu_ok && c.sigma2 && c.k && c.rho_tilde && c.epsilon0 && c.B && c.r && dg_ok &&
        *c.rho_tilde > 0.0 && *c.rho_tilde < 1.0 && *c.epsilon0 > 0.0) {
        const auto d = linear_rate_schedule_params(*rho, *c.k, *c.rho_tilde, *c.epsilon0, *c.delta, *gamma,
                                                   *c.sigma2, *c.mu, *c.B, *c.r);
        for (const auto& ch : d.checks) rep.checks.push_back(ch);
        add_value("C_rho_tilde", d.c_rho_tilde);
        add_value("C_first_branch", d.first_branch ? 1.0 : 0.0);
        add_value("C_branch_threshold", d.branch_threshold);
        add_value("eta_min", d.eta_min);
        add_value("eta_min_main_text", d.eta_min_main_text);
        add_value("k_min", static_cast<double>(d.k_min));
        if (d.eta_min_main_text < 0.0)
            rep.notes.push_back("eta >= ln(C rho_tilde) is vacuous here; eta_min uses -ln(C rho_tilde)");
        if (c.eta) add_check("eta_ge_eta_min", "eta >= -ln(C rho_tilde)", *c.eta, d.eta_min, std::nullopt,
                             *c.eta >= d.eta_min);
        if (c.n && !d.eta_unbounded) {
            const double eta = c.eta.value_or(d.eta_min);
            const double reach = achievable_lambda(eta, d.eps1, static_cast<std::size_t>(*c.n));
            add_value("achievable_lambda_n", reach);
            if (reach < 1.0)
                rep.notes.push_back("increments min(e^{-eta i}, eps1) sum to " + std::to_string(reach) +
                                    " < 1 over n iterations");
        }
        if (c.n) {
            for (std::size_t i = 0; i <= static_cast<std::size_t>(*c.n); ++i)
                rep.gap_curve.push_back(
                    hsgd_gap_bound(static_cast<double>(i), *c.rho_tilde, *c.epsilon0, *c.sigma2, *c.mu));
        }
    }
    return rep;
}

inline std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

/// Aligned key-value text.
inline void write_text(std::ostream& os, const TheoryReport& rep) {
    std::size_t width = 0;
    for (const auto& c : rep.checks) width = std::max(width, c.key.size());
    for (const auto& [k, v] : rep.values) width = std::max(width, k.size());
    auto pad = [&](const std::string& s) { return s + std::string(width + 2 - s.size(), ' '); };

    os << "[checks]\n";
    for (const auto& c : rep.checks) {
        os << pad(c.key) << (c.pass ? "PASS" : (c.gating ? "FAIL" : "info")) << "  " << c.condition
           << "  value=" << format_number(c.value);
        if (c.lower) os << " lower=" << format_number(*c.lower);
        if (c.upper) os << " upper=" << format_number(*c.upper);
        os << '\n';
    }
    os << "[values]\n";
    for (const auto& [k, v] : rep.values) os << pad(k) << format_number(v) << '\n';
    if (!rep.gap_curve.empty()) {
        os << "[gap_bound]\n";
        for (std::size_t i = 0; i < rep.gap_curve.size(); ++i)
            os << pad("i=" + std::to_string(i)) << format_number(rep.gap_curve[i]) << '\n';
    }
    for (const auto& n : rep.notes) os << "note: " << n << '\n';
    os << "feasible: " << (rep.feasible() ? "yes" : "no") << '\n';
}

}  // namespace hsgd::theory
