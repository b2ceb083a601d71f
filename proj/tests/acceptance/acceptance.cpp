// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits nonzero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hsgd/hsgd.hpp"
#include "hsgd/harness/diagnose.hpp"
#include "hsgd/harness/experiment.hpp"

using namespace hsgd;
using namespace hsgd::harness;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct MeanSe {
    std::vector<double> mean, se;
};

// Column-wise mean and standard error over rows of equal length.
MeanSe mean_se(const std::vector<std::vector<double>>& rows) {
    const std::size_t T = rows.front().size();
    const double R = static_cast<double>(rows.size());
    MeanSe out{std::vector<double>(T, 0.0), std::vector<double>(T, 0.0)};
    for (std::size_t t = 0; t < T; ++t) {
        double s = 0.0, s2 = 0.0;
        for (const auto& r : rows) {
            s += r[t];
            s2 += r[t] * r[t];
        }
        out.mean[t] = s / R;
        const double var = std::max(0.0, (s2 - R * out.mean[t] * out.mean[t]) / (R - 1.0));
        out.se[t] = std::sqrt(var / R);
    }
    return out;
}

// R^2 of the least-squares line through (x, y).
double r_squared(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i] / n;
        my += y[i] / n;
    }
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (syy == 0.0) return 1.0;
    return sxy * sxy / (sxx * syy);
}

// Fit of log mean gap over the rows from `first` up to the plateau: the
// plateau detector's epoch, or the first row whose gap is at the 1e-12 floor.
struct LogFit {
    double r2 = 0.0;
    std::size_t points = 0;
};

LogFit pre_plateau_fit(const RunTrace& t, std::size_t first, std::optional<std::size_t> plateau) {
    std::vector<double> x, y;
    for (const auto& row : t) {
        if (row.epoch < first) continue;
        if (plateau && row.epoch >= *plateau) break;
        if (!row.mean_gap || *row.mean_gap <= 1e-12) break;
        x.push_back(static_cast<double>(row.epoch));
        y.push_back(std::log(*row.mean_gap));
    }
    return {x.size() >= 3 ? r_squared(x, y) : 0.0, x.size()};
}

// -- 1 ------------------------------------------------------------------------

Outcome toy_curves() {
    auto c = default_config(ExperimentKind::toy_erf);
    c.repeats = 100;
    const auto rep = run_experiment(c, false);
    if (rep.any_failed()) return {false, "an arm failed"};
    const auto& s = rep.arm("sgd")->trace;
    const auto& h = rep.arm("hsgd")->trace;
    const std::size_t spe = (c.data.n + c.opt.minibatch - 1) / c.opt.minibatch;
    const std::size_t first_iter = (c.opt.k + spe - 1) / spe;

    const auto fs = pre_plateau_fit(s, 0, rep.arm("sgd")->convergence_epoch);
    const auto fh = pre_plateau_fit(h, first_iter, rep.arm("hsgd")->convergence_epoch);
    std::size_t worse = 0, compared = 0, first_bad = 0;
    for (std::size_t i = 0; i < std::min(s.size(), h.size()); ++i) {
        if (h[i].epoch < first_iter) continue;
        ++compared;
        if (*h[i].mean_gap > *s[i].mean_gap) {
            if (!worse) first_bad = h[i].epoch;
            ++worse;
        }
    }
    const bool shape = fs.r2 >= 0.95 && fh.r2 >= 0.95 && fs.points >= 3 && fh.points >= 3;
    std::ostringstream d;
    d << "R2 sgd=" << fmt(fs.r2) << " (" << fs.points << " pts), hsgd=" << fmt(fh.r2) << " (" << fh.points
      << " pts); hsgd above sgd at " << worse << "/" << compared << " epochs";
    if (worse) d << " (first at epoch " << first_bad << ")";
    d << "; terminal gap sgd=" << fmt(*s.back().mean_gap) << " hsgd=" << fmt(*h.back().mean_gap);
    return {shape && worse == 0, d.str()};
}

// -- 2, 3 ----------------------------------------------------------------------

Outcome speedup(ExperimentKind kind, double needed) {
    auto c = default_config(kind);
    c.repeats = 100;
    const auto rep = run_experiment(c, false);
    if (rep.any_failed()) return {false, "an arm failed: " + (rep.arm("sgd")->failed ? rep.arm("sgd")->failure
                                                                                        : rep.arm("hsgd")->failure)};
    const auto& sp = rep.threshold_speedup;
    auto epochs = [](const ArmReport* a) {
        return a->epochs_to_threshold ? std::to_string(*a->epochs_to_threshold)
                                      : "not reached by " + std::to_string(a->last_epoch);
    };
    std::ostringstream d;
    d << rep.metric << " <= " << fmt(*c.threshold) << ": sgd " << epochs(rep.arm("sgd")) << ", hsgd "
      << epochs(rep.arm("hsgd"));
    if (sp.value) d << "; speedup " << fmt(*sp.value);
    if (sp.lower_bound) d << "; speedup > " << fmt(*sp.lower_bound) << " (censored)";
    d << "; terminal sgd=" << fmt(rep.arm("sgd")->terminal_mean) << " hsgd=" << fmt(rep.arm("hsgd")->terminal_mean)
      << "; need >= " << fmt(needed);
    const bool ok = (sp.value && *sp.value >= needed) || (sp.lower_bound && *sp.lower_bound >= needed);
    return {ok, d.str()};
}

// -- 4 ------------------------------------------------------------------------

Outcome mu_landscape() {
    auto c = default_config(ExperimentKind::toy_erf);
    const auto est = run_diagnose(c);
    const auto& curve = est.mu_curve;
    if (curve.empty()) return {false, "no mu curve"};
    const ExperimentSetup s = build_setup(c);
    const double wstar = estimate_fstar(*s.problem, 1.0, GridSearch{}).argmin[0];

    const std::size_t grid = 1201;
    bool positive = curve.size() + 1 >= grid;
    for (const auto& m : curve) positive = positive && m.mu > 0.0;

    std::vector<double> smooth(curve.size());
    for (std::size_t i = 0; i < curve.size(); ++i) {
        std::vector<double> win;
        for (std::size_t j = i >= 2 ? i - 2 : 0; j <= std::min(curve.size() - 1, i + 2); ++j) win.push_back(curve[j].mu);
        std::nth_element(win.begin(), win.begin() + win.size() / 2, win.end());
        smooth[i] = win[win.size() / 2];
    }
    // Gating: decay over |w| > |w*| + 1. Also reported: the stricter
    // two-sided reading |w - w*| > 1.
    // side(w) is +1 where mu must fall as w grows, -1 where it must rise,
    // 0 outside the checked region.
    auto count = [&](auto side, double& first) {
        std::size_t n = 0;
        for (std::size_t i = 1; i < curve.size(); ++i) {
            const int sa = side(curve[i - 1].w), sb = side(curve[i].w);
            const double b = curve[i].w;
            bool bad = false;
            if (sa != 0 && sa == sb) bad = sb > 0 ? smooth[i] > smooth[i - 1] : smooth[i] < smooth[i - 1];
            if (bad && !n++) first = b;
        }
        return n;
    };
    double first_violation = 0.0, first_strict = 0.0;
    const std::size_t violations = count(
        [&](double w) { return std::abs(w) > std::abs(wstar) + 1.0 ? (w > 0 ? 1 : -1) : 0; }, first_violation);
    const std::size_t strict =
        count([&](double w) { return w > wstar + 1.0 ? 1 : (w < wstar - 1.0 ? -1 : 0); }, first_strict);
    std::ostringstream d;
    d << curve.size() << " grid points, min mu=" << fmt(*est.get("mu_profile_min")) << ", fitted minimizer "
      << fmt(wstar) << ", mu peak at " << fmt(*est.get("mu_profile_argmax")) << "; " << violations
      << " monotonicity violations for |w| > |w*|+1";
    if (violations) d << " (first at w=" << fmt(first_violation) << ")";
    d << "; two-sided |w-w*| > 1 reading: " << strict << " violations";
    if (strict) d << " (first at w=" << fmt(first_strict) << ")";
    return {positive && violations == 0, d.str()};
}

// -- 5, 6 ---------------------------------------------------------------------

struct Family {
    std::string name;
    std::unique_ptr<HomotopyProblem> problem;
    double tol;
    double spread;
};

std::vector<Family> families(std::size_t n, std::uint64_t seed) {
    std::vector<Family> out;
    const auto toy = gen_linear_toy(n, 3.0, 1.0, seed);
    const auto xs = toy.column(0);
    out.push_back({"erf", std::make_unique<ErfRegressionProblem>(xs, toy.targets, linear_source_labels(xs, -4.0)), 1e-6,
                   5.0});
    const auto sine = gen_sine(n, 10.0, std::sqrt(0.1), seed);
    out.push_back({"mlp",
                   std::make_unique<MlpRegressionProblem>(sine.column(0), sine.targets, *sine.source_targets), 1e-5,
                   1.0});
    const auto moons = gen_moons(n % 2 ? n + 1 : n, 0.1, seed);
    std::vector<CubicLogisticProblem::Point> pts(moons.size());
    for (std::size_t j = 0; j < moons.size(); ++j) pts[j] = {moons.x(j, 0), moons.x(j, 1)};
    out.push_back({"logistic", std::make_unique<CubicLogisticProblem>(pts, moons.targets), 1e-5, 1.0});
    return out;
}

ParamVector random_point(std::size_t d, double spread, Rng& rng) {
    ParamVector w(d);
    for (std::size_t i = 0; i < d; ++i) w[i] = rng.uniform(-spread, spread);
    return w;
}

Outcome gradient_checks() {
    Rng rng(5);
    std::ostringstream d;
    bool ok = true;
    for (auto& f : families(100, 1)) {
        double worst = 0.0;
        for (int i = 0; i < 50; ++i) {
            const auto w = random_point(f.problem->dimension(), f.spread, rng);
            const double lambda = rng.next_double();
            worst = std::max(worst, check_gradient(*f.problem, lambda, w).max_rel_error);
        }
        ok = ok && worst < f.tol;
        d << f.name << " max rel err " << fmt(worst) << " (< " << fmt(f.tol) << "); ";
    }
    return {ok, d.str()};
}

Outcome unbiasedness() {
    Rng rng(6);
    double worst = 0.0;
    std::size_t cases = 0;
    for (std::size_t n = 2; n <= 8; ++n) {
        for (auto& f : families(n, 100 + n)) {
            const auto& p = *f.problem;
            for (std::size_t m = 1; m <= std::min<std::size_t>(3, p.sample_count()); ++m) {
                for (int trial = 0; trial < 3; ++trial) {
                    const auto w = random_point(p.dimension(), f.spread, rng);
                    const double lambda = rng.next_double();
                    const ParamVector full = p.gradient(w, lambda);
                    ParamVector sum(p.dimension()), g;
                    double count = 0.0;
                    hsgd::detail::for_each_subset(p.sample_count(), m, [&](std::span<const std::size_t> idx) {
                        p.minibatch_value_and_gradient(w, lambda, idx, g);
                        sum += g;
                        count += 1.0;
                    });
                    for (std::size_t i = 0; i < w.size(); ++i)
                        worst = std::max(worst, std::abs(sum[i] / count - full[i]) / std::max(1.0, std::abs(full[i])));
                    ++cases;
                }
            }
        }
    }
    return {worst <= 1e-12, std::to_string(cases) + " cases, max deviation " + fmt(worst)};
}

// -- 7 ------------------------------------------------------------------------

Outcome schedule_contract() {
    Rng rng(7);
    std::size_t bad = 0;
    double worst_sum = 0.0, worst_ratio = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto kind = static_cast<ScheduleKind>(rng.uniform_index(3));
        const std::size_t n = 1 + rng.uniform_index(200);
        const double eta = rng.uniform(0.0, std::min(5.0, 600.0 / static_cast<double>(n)));
        std::vector<double> weights(n);
        for (auto& w : weights) w = rng.uniform(1e-3, 10.0);
        const auto s = make_schedule(kind, n, eta, &weights);
        double sum = 0.0;
        for (double h : s.increments()) {
            if (!(h > 0.0)) ++bad;
            sum += h;
        }
        worst_sum = std::max(worst_sum, std::abs(sum - 1.0));
        if (kind == ScheduleKind::exponential)
            for (std::size_t i = 1; i < n; ++i)
                worst_ratio = std::max(worst_ratio,
                                       std::abs(s.increment(i + 1) / s.increment(i) - std::exp(-eta)) / std::exp(-eta));
    }
    const bool ok = bad == 0 && worst_sum <= 1e-12 && worst_ratio <= 1e-12;
    return {ok, "max |sum-1|=" + fmt(worst_sum) + ", max ratio rel err=" + fmt(worst_ratio) + ", nonpositive h=" +
                    std::to_string(bad)};
}

// -- 8 ------------------------------------------------------------------------

Outcome toy_sgd_bound() {
    const auto data = gen_linear_toy();
    const auto xs = data.column(0);
    const ErfRegressionProblem p(xs, data.targets, linear_source_labels(xs, -4.0));
    const ParamVector w0{-4.0};
    Rng est(11);
    const double L = estimate_L(p, 1.0, 10000, 10.0, est, w0);
    const double fstar = estimate_fstar(p, 1.0, GridSearch{}).value;
    const std::size_t T = 500, R = 100, M = 10;

    std::vector<std::vector<double>> gaps(R, std::vector<double>(T + 1));
    std::vector<ParamVector> visited;
    for (std::size_t r = 0; r < R; ++r) {
        Rng rng(repeat_stream_seed(8, r));
        gaps[r][0] = p.objective(w0, 1.0) - fstar;
        visited.push_back(w0);
        sgd_run(w0, {1.0 / L, T, M}, p, 1.0, rng, [&](const StepEvent& e) {
            gaps[r][e.step] = p.objective(e.w, 1.0) - fstar;
            visited.push_back(e.w);
        });
    }
    double mu_min = HUGE_VAL;
    for (const auto& w : visited)
        if (p.objective(w, 1.0) - fstar > optimum_gap_tolerance) mu_min = std::min(mu_min, estimate_mu(p, 1.0, w, fstar));
    std::vector<ParamVector> probe;
    for (std::size_t i = 0; i < visited.size(); i += 997) probe.push_back(visited[i]);
    Rng sr(12);
    const double sigma2 = estimate_sigma2(p, 1.0, probe, M, 1000, sr);
    const double rho = 1.0 - mu_min / L;

    const auto ms = mean_se(gaps);
    std::size_t violations = 0;
    double tightest = HUGE_VAL;
    for (std::size_t t = 0; t <= T; ++t) {
        const double bound = std::pow(rho, static_cast<double>(t)) * ms.mean[0] + sigma2 / (2 * mu_min) + 3 * ms.se[t];
        if (ms.mean[t] > bound) ++violations;
        tightest = std::min(tightest, bound - ms.mean[t]);
    }
    std::ostringstream d;
    d << "L~=" << fmt(L) << ", mu_min=" << fmt(mu_min) << ", sigma2=" << fmt(sigma2) << ", rho=" << fmt(rho) << "; "
      << violations << "/" << T + 1 << " steps above bound, min slack " << fmt(tightest);
    return {violations == 0, d.str()};
}

// -- 9, 10 --------------------------------------------------------------------

// The quadratic family f(w, lambda) = mu/2 (w - lambda)^2 with alternating
// offsets. On {gap <= B}, |w - lambda| <= sqrt(2B/mu), so moving lambda by
// d <= 1 raises the gap by at most mu (sqrt(2B/mu) + 1/2) d; that slope is
// split evenly into delta and gamma.
struct LqSetup {
    double mu = 1.0, alpha = 0.5;
    std::size_t N = 8, M = 2;
    double spread = 0.2;
    LinearQuadraticProblem problem = LinearQuadraticProblem::alternating(1.0, 8, 0.2);
    double sigma2() const { return problem.minibatch_variance(M); }
    double rho() const { return 1.0 - alpha * mu; }
    double dg(double B) const { return mu * (std::sqrt(2.0 * B / mu) + 0.5); }
};

// Mean and SE of the gap after each homotopy iteration (index 0 = start).
MeanSe run_lq(const LqSetup& lq, const Schedule& schedule, std::size_t k, const ParamVector& w0, std::size_t R,
              std::uint64_t seed) {
    std::vector<std::vector<double>> gaps(R, std::vector<double>(schedule.size() + 1));
    for (std::size_t r = 0; r < R; ++r) {
        Rng rng(repeat_stream_seed(seed, r));
        gaps[r][0] = lq.problem.objective(w0, 0.0);
        hsgd_run(w0, schedule, {lq.alpha, k, lq.M}, lq.problem, rng, {},
                 [&](const HomotopyEvent& e) { gaps[r][e.iteration] = lq.problem.objective(e.w, e.lambda); });
    }
    return mean_se(gaps);
}

Outcome lq_tracking() {
    const LqSetup lq;
    const double B = 1.0, r = 0.1;
    const double dg = lq.dg(B);
    const auto km = theory::kmax_tracking(lq.rho(), lq.sigma2(), lq.mu, r);
    const std::size_t k = static_cast<std::size_t>(km) + 2;
    const auto te = theory::tracking_epsilons(lq.rho(), static_cast<double>(k), lq.sigma2(), lq.mu, r, B, dg / 2, dg / 2);
    if (!te.feasible) return {false, "constants infeasible: " + te.reason};
    const auto n = static_cast<std::size_t>(std::ceil(1.0 / te.eps_tilde));
    const auto schedule = make_schedule(ScheduleKind::constant, n);
    const auto ms = run_lq(lq, schedule, k, ParamVector{0.0}, 200, 9);
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i <= n; ++i) {
        if (ms.mean[i] > r + 3 * ms.se[i]) ++violations;
        worst = std::max(worst, ms.mean[i]);
    }
    std::ostringstream d;
    d << "k=" << k << " (kmax " << km << "), eps_tilde=" << fmt(te.eps_tilde) << ", n=" << n << ", max mean gap "
      << fmt(worst) << " vs r=" << fmt(r) << ", " << violations << " violations";
    return {violations == 0, d.str()};
}

Outcome lq_linear_rate() {
    const LqSetup lq;
    const double B = 0.2, r = 0.1, rho_tilde = 0.8;
    const double dg = lq.dg(B);
    const ParamVector w0{std::sqrt(0.1)};  // gap 0.05 at lambda = 0
    const double eps0 = lq.problem.objective(w0, 0.0);
    // Smallest k on the first branch of the case split.
    const double threshold =
        theory::log_base(lq.rho(), rho_tilde) - theory::log_base(lq.rho(), 1.0 + dg / eps0);
    const std::size_t k = static_cast<std::size_t>(std::max(1.0, std::ceil(threshold)));
    const auto design =
        theory::linear_rate_schedule_params(lq.rho(), static_cast<double>(k), rho_tilde, eps0, dg / 2, dg / 2,
                                            lq.sigma2(), lq.mu, B, r);
    if (!design.feasible()) return {false, "constants infeasible"};

    // Increments min(e^{-eta i}, eps1) at eta = eta_min, the last one cut so
    // that lambda ends at exactly 1.
    std::vector<double> h;
    double total = 0.0;
    for (std::size_t i = 0; total < 1.0 && i < 10000; ++i) {
        double step = std::min(std::exp(-design.eta_min * static_cast<double>(i)), design.eps1);
        step = std::min(step, 1.0 - total);
        if (step < 1e-15) break;
        h.push_back(step);
        total += step;
    }
    if (std::abs(total - 1.0) > 1e-12) return {false, "increments sum to " + fmt(total) + " < 1"};
    const auto schedule = make_schedule(ScheduleKind::explicit_list, h.size(), std::nullopt, &h);

    const auto ms = run_lq(lq, schedule, k, w0, 200, 10);
    std::size_t violations = 0;
    double slack = HUGE_VAL;
    for (std::size_t i = 0; i < ms.mean.size(); ++i) {
        const double bound = theory::hsgd_gap_bound(static_cast<double>(i), rho_tilde, eps0, lq.sigma2(), lq.mu);
        // 1e-12 absorbs rounding at i = 0, where the gap equals the bound.
        if (ms.mean[i] > bound + 3 * ms.se[i] + 1e-12) ++violations;
        slack = std::min(slack, bound + 3 * ms.se[i] - ms.mean[i]);
    }
    std::ostringstream d;
    d << "k=" << k << ", C=" << fmt(design.c_rho_tilde) << ", eta_min=" << fmt(design.eta_min) << ", eps1="
      << fmt(design.eps1) << ", n=" << h.size() << "; " << violations << " iterations above bound, min slack "
      << fmt(slack);
    return {violations == 0, d.str()};
}

// -- 11 -----------------------------------------------------------------------

template <class Pred>
std::int64_t first_k(Pred pred) {
    for (std::int64_t k = 0; k <= 1000000; ++k)
        if (pred(static_cast<double>(k))) return k;
    return -1;
}

Outcome calculators() {
    Rng rng(11);
    std::size_t mismatches = 0;
    std::string first;
    auto miss = [&](const std::string& what, int trial) {
        if (!mismatches++) first = what + " at point " + std::to_string(trial);
    };
    for (int trial = 0; trial < 1000; ++trial) {
        const double rho = rng.uniform(0.3, 0.98);
        const double mu = rng.uniform(0.2, 3.0);
        const double sigma2 = rng.uniform(0.0, 0.5);
        const double floor = sigma2 / (2 * mu);
        const double r = floor + rng.uniform(0.01, 1.0);
        const double B = r + rng.uniform(0.0, 1.0);
        const double dg = rng.uniform(0.1, 2.0);
        const double k = std::floor(rng.uniform(1.0, 60.0));

        if (theory::kmax_tracking(rho, sigma2, mu, r) !=
            first_k([&](double kk) { return std::pow(rho, kk) * r + floor <= r; }))
            miss("kmax_tracking", trial);

        const double eps = rng.uniform(0.0, 0.99) * (B - floor) / dg;
        if (theory::kmax_warmstart(rho, mu, dg / 2, dg / 2, eps, sigma2, B) !=
            first_k([&](double kk) { return std::pow(rho, kk) * B + floor <= B - dg * eps; }))
            miss("kmax_warmstart", trial);

        const auto te = theory::tracking_epsilons(rho, k, sigma2, mu, r, B, dg / 2, dg / 2);
        const double rk = std::pow(rho, k);
        auto tracks = [&](double e) { return r + dg * e <= B && rk * (r + dg * e) + floor <= r; };
        const bool brute_feasible = rk * r + floor <= r;
        if (te.feasible != brute_feasible) miss("tracking_epsilons feasibility", trial);
        if (te.feasible) {
            const double e = te.eps_tilde;
            if (!tracks(e * (1 - 1e-9)) || tracks(e * (1 + 1e-9) + 1e-12)) miss("tracking_epsilons threshold", trial);
        }

        const double rt = rng.uniform(0.05, 0.95);
        const double e0 = rng.uniform(0.05, 1.0);
        const auto d = theory::linear_rate_schedule_params(rho, k, rt, e0, dg / 2, dg / 2, sigma2, mu, B, r);
        const bool first_branch = rk * (1 + dg / e0) <= rt;
        if (std::abs(rk * (1 + dg / e0) - rt) > 1e-12 * rt && d.first_branch != first_branch)
            miss("linear_rate branch", trial);
        const double C = first_branch ? 1.0 : (rt - rk) / rk * e0 / dg;
        if (std::abs(d.c_rho_tilde - C) > 1e-12 * std::max(1.0, C)) miss("linear_rate C", trial);
        if (C > 0 && std::abs(std::exp(-d.eta_min) - C * rt) > 1e-12) miss("linear_rate eta_min", trial);
        if (d.k_min != first_k([&](double kk) { return std::pow(rho, kk) <= rt; })) miss("linear_rate k_min", trial);
        const bool rt_ok = rt <= 1 - floor / B;
        for (const auto& ch : d.checks)
            if (ch.key == "rho_tilde_upper" && ch.pass != rt_ok) miss("linear_rate rho_tilde check", trial);
    }
    return {mismatches == 0, "1000 points, " + std::to_string(mismatches) + " mismatches" +
                                 (mismatches ? " (first: " + first + ")" : "")};
}

// -- 12 -----------------------------------------------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int cli(const std::string& args) {
    const std::string cmd = std::string(HSGD_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome replay() {
    const fs::path root = fs::temp_directory_path() / "hsgd_acceptance_replay";
    fs::remove_all(root);
    fs::create_directories(root);
    std::size_t compared = 0, differing = 0;
    std::string detail;
    for (auto kind : {ExperimentKind::toy_erf, ExperimentKind::sine_mlp, ExperimentKind::moons_logistic,
                      ExperimentKind::synthetic_lq}) {
        auto c = default_config(kind);
        c.repeats = 3;
        c.opt.n = std::min<std::size_t>(c.opt.n, 4);
        c.opt.k = std::min<std::size_t>(c.opt.k, 200);
        c.opt.sgd_steps = c.opt.n * c.opt.k;
        const std::string name(to_string(kind));
        c.out_dir = (root / name / "first").string();
        {
            std::ofstream f(root / (name + ".json"), std::ios::binary);
            f << to_json(c).dump(2);
        }
        if (cli("run --config " + (root / (name + ".json")).string()) != 0) return {false, name + ": run failed"};
        const fs::path first = c.out_dir, second = root / name / "replay";
        if (cli("run --config " + (first / "metadata.json").string() + " --out " + second.string()) != 0)
            return {false, name + ": replay failed"};
        for (const auto& e : fs::directory_iterator(first)) {
            if (e.path().extension() != ".csv") continue;
            ++compared;
            if (slurp(e.path()) != slurp(second / e.path().filename())) {
                ++differing;
                detail += " " + name + "/" + e.path().filename().string();
            }
        }
    }
    return {compared > 0 && differing == 0,
            std::to_string(compared) + " CSVs compared, " + std::to_string(differing) + " differ" + detail};
}

}  // namespace

int main() {
    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, toy_curves},
        {2, [] { return speedup(ExperimentKind::sine_mlp, 2.0); }},
        {3, [] { return speedup(ExperimentKind::moons_logistic, 1.5); }},
        {4, mu_landscape},
        {5, gradient_checks},
        {6, unbiasedness},
        {7, schedule_contract},
        {8, toy_sgd_bound},
        {9, lq_tracking},
        {10, lq_linear_rate},
        {11, calculators},
        {12, replay},
    };
    int failed = 0;
    for (const auto& [id, fn] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << " - " << o.detail << " [" << fmt(secs)
                  << " s]" << std::endl;
        failed += !o.pass;
    }
    std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
    return failed ? 1 : 0;
}
