#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hsgd/core/errors.hpp"
#include "hsgd/core/rng.hpp"
#include "hsgd/data/datasets.hpp"
#include "hsgd/diagnostics/estimators.hpp"
#include "hsgd/harness/config.hpp"
#include "hsgd/harness/parallel.hpp"
#include "hsgd/harness/setup.hpp"
#include "hsgd/optim/hsgd.hpp"
#include "hsgd/optim/schedule.hpp"
#include "hsgd/optim/sgd.hpp"
#include "hsgd/optim/trace.hpp"
#include "hsgd/theory/report.hpp"
#include "hsgd/version.hpp"

namespace hsgd::harness {

inline constexpr const char* trace_header = "epoch,lambda,mean_objective,std_objective,mean_gap,grad_evals";

/// H-SGD iterate after homotopy iteration `iteration` of repeat 0.
struct Snapshot {
    std::size_t iteration = 0;
    double lambda = 0.0;
    double objective = 0.0;         // f(w_i, lambda_i)
    double target_objective = 0.0;  // f(w_i, 1)
    ParamVector w;
};

struct ArmReport {
    std::string method;
    bool failed = false;
    std::string failure;
    RunTrace trace;
    std::vector<Snapshot> snapshots;
    std::optional<std::size_t> epochs_to_threshold;
    std::optional<std::size_t> convergence_epoch;
    double terminal_mean = 0.0;
    double terminal_std = 0.0;
    std::size_t last_epoch = 0;
};

/// Speedup of H-SGD over SGD in epochs to reach some level.
struct Speedup {
    std::optional<double> value;        // defined only when both arms reach the level
    std::optional<double> lower_bound;  // SGD censored, H-SGD reached
    std::optional<std::size_t> censoring_epoch;
    std::string status;  // "reached", "not reached", "unavailable"
};

struct ComparisonReport {
    std::string experiment;
    std::string metric;
    std::optional<double> threshold;
    std::vector<ArmReport> arms;
    Speedup threshold_speedup;
    Speedup convergence_speedup;
    double step_size = 0.0;
    std::optional<double> L_tilde;
    std::optional<double> sigma2_hat;
    std::optional<double> fstar;
    std::vector<std::string> warnings;

    const ArmReport* arm(const std::string& method) const {
        for (const auto& a : arms)
            if (a.method == method) return &a;
        return nullptr;
    }
    bool any_failed() const {
        for (const auto& a : arms)
            if (a.failed) return true;
        return false;
    }
};

/// First epoch whose mean metric is at or below tau.
inline std::optional<std::size_t> epochs_to_threshold(const RunTrace& t, double tau) {
    for (const auto& row : t)
        if (row.mean_objective <= tau) return row.epoch;
    return std::nullopt;
}

/// First epoch e whose mean metric changed by less than `rel_tol` relative
/// to the row `window` epochs earlier. Both rows must be at lambda = 1, so
/// a homotopy run cannot "converge" on an intermediate problem.
inline std::optional<std::size_t> convergence_epoch(const RunTrace& t, double rel_tol, std::size_t window) {
    for (std::size_t i = window; i < t.size(); ++i) {
        if (t[i - window].lambda != 1.0) continue;
        const double prev = t[i - window].mean_objective;
        if (std::abs(t[i].mean_objective - prev) <= rel_tol * std::abs(prev)) return t[i].epoch;
    }
    return std::nullopt;
}

inline Speedup compare_epochs(const ArmReport* sgd, const ArmReport* hsgd, std::optional<std::size_t> ArmReport::*field) {
    Speedup s;
    if (!sgd || !hsgd || sgd->failed || hsgd->failed) {
        s.status = "unavailable";
        return s;
    }
    const auto& es = sgd->*field;
    const auto& eh = hsgd->*field;
    if (es && eh) {
        s.status = "reached";
        s.value = *eh == 0 ? (*es == 0 ? 1.0 : HUGE_VAL) : static_cast<double>(*es) / static_cast<double>(*eh);
        return s;
    }
    s.status = "not reached";
    if (!es) s.censoring_epoch = sgd->last_epoch;
    if (!es && eh && *eh > 0) s.lower_bound = static_cast<double>(sgd->last_epoch) / static_cast<double>(*eh);
    if (es && !eh) s.censoring_epoch = hsgd->last_epoch;
    return s;
}

namespace detail {

struct RepeatOutcome {
    EpochSeries series;
    std::optional<std::string> failure;
    std::vector<Snapshot> snapshots;
};

inline bool wants_snapshots(const ExperimentConfig& c) {
    return c.experiment == ExperimentKind::toy_erf || c.experiment == ExperimentKind::sine_mlp;
}

inline std::vector<std::string> methods(Method m) {
    if (m == Method::sgd) return {"sgd"};
    if (m == Method::hsgd) return {"hsgd"};
    return {"sgd", "hsgd"};
}

}  // namespace detail

/// Resolved run-time quantities that are not part of the config.
struct RunContext {
    double step_size = 0.0;
    std::optional<double> L_tilde;
    std::optional<double> sigma2_hat;
    std::optional<double> eta;
    std::vector<std::string> warnings;
};

/// L~ (when the step is automatic) and sigma^2 at the initial iterate, both
/// from the estimator sub-stream of the master seed.
inline RunContext resolve(const ExperimentConfig& c, const ExperimentSetup& s) {
    RunContext ctx;
    Rng est(derive_seed(c.master_seed, stream_tag::estimator));
    const ParamVector w_init = s.init(repeat_stream_seed(c.master_seed, 0));
    if (!c.opt.step_size) {
        ctx.L_tilde = estimate_L(*s.problem, 1.0, c.opt.l_pairs, c.opt.l_radius, est, w_init);
        if (!(*ctx.L_tilde > 0.0)) throw EstimationError("auto step size: L~ is zero");
        ctx.step_size = 1.0 / *ctx.L_tilde;
    } else {
        ctx.step_size = *c.opt.step_size;
    }
    const std::vector<ParamVector> at{w_init};
    ctx.sigma2_hat = estimate_sigma2(*s.problem, 1.0, at, c.opt.minibatch, c.opt.sigma2_draws, est);

    ctx.eta = c.opt.eta;
    if (c.opt.schedule == ScheduleKind::exponential && !ctx.eta && c.constants) {
        const auto rep = theory::evaluate(*c.constants);
        const auto eta_min = rep.value("eta_min");
        if (!eta_min || !std::isfinite(*eta_min))
            throw InfeasibleError("constants do not determine a finite eta_min for the exponential schedule");
        ctx.eta = std::max(0.0, *eta_min);
    }
    SgdConfig cfg{ctx.step_size, c.opt.k, c.opt.minibatch};
    ctx.warnings = cfg.warnings(ctx.L_tilde);
    return ctx;
}

inline Schedule schedule_for(const ExperimentConfig& c, const RunContext& ctx) {
    return make_schedule(c.opt.schedule, c.opt.n, ctx.eta, &c.opt.weights);
}

/// Run one arm over every repeat. Never throws for per-repeat numerical
/// failures; those mark the arm failed.
inline ArmReport run_arm(const std::string& method, const ExperimentConfig& c, const ExperimentSetup& s,
                         const RunContext& ctx) {
    const auto& problem = *s.problem;
    const Schedule schedule = schedule_for(c, ctx);
    const bool hsgd = method == "hsgd";
    const bool snap = hsgd && detail::wants_snapshots(c);
    std::vector<bool> snap_at(c.opt.n + 1, c.snapshots.empty());
    for (auto i : c.snapshots) snap_at[i] = true;

    std::vector<detail::RepeatOutcome> out(c.repeats);
    parallel_for(c.repeats, thread_budget(), [&](std::size_t r) {
        auto& o = out[r];
        const std::uint64_t seed = repeat_stream_seed(c.master_seed, r);
        Rng rng(seed);
        ParamVector w = s.init(seed);
        EpochRecorder rec(problem.sample_count(), c.opt.minibatch, s.metric);
        try {
            if (hsgd) {
                rec.start(w, 0.0);
                HomotopyObserver on_iter;
                if (snap && r == 0)
                    on_iter = [&](const HomotopyEvent& e) {
                        if (snap_at[e.iteration])
                            o.snapshots.push_back(
                                {e.iteration, e.lambda, problem.objective(e.w, e.lambda), s.metric(e.w), e.w});
                    };
                w = hsgd_run(std::move(w), schedule, SgdConfig{ctx.step_size, c.opt.k, c.opt.minibatch}, problem,
                             rng, rec.observer(), on_iter);
            } else {
                rec.start(w, 1.0);
                w = sgd_run(std::move(w), SgdConfig{ctx.step_size, c.opt.sgd_steps, c.opt.minibatch}, problem, 1.0,
                            rng, rec.observer());
            }
            rec.finish(w);
            o.series = rec.take();
            for (double v : o.series.values)
                if (!std::isfinite(v)) throw NonFiniteError(0, "trace value");
        } catch (const std::exception& e) {
            o.failure = "repeat " + std::to_string(r) + ": " + e.what();
        }
    });

    ArmReport arm;
    arm.method = method;
    for (const auto& o : out)
        if (o.failure) {
            arm.failed = true;
            arm.failure = *o.failure;
            return arm;
        }
    std::vector<EpochSeries> series;
    series.reserve(out.size());
    for (auto& o : out) series.push_back(std::move(o.series));
    arm.trace = aggregate(series, s.fstar);
    arm.snapshots = std::move(out.front().snapshots);
    if (!arm.trace.empty()) {
        arm.terminal_mean = arm.trace.back().mean_objective;
        arm.terminal_std = arm.trace.back().std_objective;
        arm.last_epoch = arm.trace.back().epoch;
    }
    if (c.threshold) arm.epochs_to_threshold = epochs_to_threshold(arm.trace, *c.threshold);
    arm.convergence_epoch = convergence_epoch(arm.trace, c.plateau_tol, c.plateau_window);
    return arm;
}

inline void write_trace_csv(std::ostream& os, const RunTrace& t) {
    os << trace_header << '\n';
    for (const auto& r : t) {
        os << r.epoch << ',' << format_real(r.lambda) << ',' << format_real(r.mean_objective) << ','
           << format_real(r.std_objective) << ',';
        if (r.mean_gap) os << format_real(*r.mean_gap);
        os << ',' << r.grad_evals << '\n';
    }
}

inline void write_snapshot_csv(std::ostream& os, const std::vector<Snapshot>& snaps) {
    os << "iteration,lambda,objective,target_objective";
    const std::size_t d = snaps.empty() ? 0 : snaps.front().w.size();
    for (std::size_t i = 0; i < d; ++i) os << ",w" << i + 1;
    os << '\n';
    for (const auto& s : snaps) {
        os << s.iteration << ',' << format_real(s.lambda) << ',' << format_real(s.objective) << ','
           << format_real(s.target_objective);
        for (double v : s.w) os << ',' << format_real(v);
        os << '\n';
    }
}

inline json speedup_json(const Speedup& s) {
    json j;
    j["status"] = s.status;
    j["value"] = s.value ? json(*s.value) : json(nullptr);
    j["lower_bound"] = s.lower_bound ? json(*s.lower_bound) : json(nullptr);
    j["censoring_epoch"] = s.censoring_epoch ? json(*s.censoring_epoch) : json(nullptr);
    return j;
}

inline json report_json(const ComparisonReport& r) {
    json j;
    j["experiment"] = r.experiment;
    j["metric"] = r.metric;
    j["threshold"] = r.threshold ? json(*r.threshold) : json(nullptr);
    json arms = json::array();
    for (const auto& a : r.arms) {
        json aj;
        aj["method"] = a.method;
        aj["failed"] = a.failed;
        if (a.failed) aj["failure"] = a.failure;
        aj["epochs_to_threshold"] = a.epochs_to_threshold ? json(*a.epochs_to_threshold) : json(nullptr);
        aj["convergence_epoch"] = a.convergence_epoch ? json(*a.convergence_epoch) : json(nullptr);
        aj["terminal_mean"] = a.terminal_mean;
        aj["terminal_std"] = a.terminal_std;
        aj["last_epoch"] = a.last_epoch;
        arms.push_back(aj);
    }
    j["arms"] = arms;
    j["speedup"] = speedup_json(r.threshold_speedup);
    j["convergence_speedup"] = speedup_json(r.convergence_speedup);
    j["convergence_definition"] = "relative change of the mean metric below plateau.rel_tol over plateau.window epochs";
    return j;
}

/// Text summary of a comparison.
inline void write_summary(std::ostream& os, const ComparisonReport& r) {
    os << "experiment: " << r.experiment << "  metric: " << r.metric << "  step_size: " << format_real(r.step_size)
       << '\n';
    if (r.L_tilde) os << "L_tilde: " << format_real(*r.L_tilde) << '\n';
    if (r.sigma2_hat) os << "sigma2_hat: " << format_real(*r.sigma2_hat) << '\n';
    if (r.fstar) os << "fstar: " << format_real(*r.fstar) << '\n';
    for (const auto& a : r.arms) {
        os << a.method << ": ";
        if (a.failed) {
            os << "FAILED (" << a.failure << ")\n";
            continue;
        }
        os << "terminal " << format_real(a.terminal_mean) << " +- " << format_real(a.terminal_std) << " at epoch "
           << a.last_epoch;
        if (r.threshold)
            os << ", epochs to " << format_real(*r.threshold) << ": "
               << (a.epochs_to_threshold ? std::to_string(*a.epochs_to_threshold) : "not reached");
        os << ", converged at: " << (a.convergence_epoch ? std::to_string(*a.convergence_epoch) : "not reached")
           << '\n';
    }
    auto print = [&](const char* label, const Speedup& s) {
        os << label << ": ";
        if (s.value)
            os << format_real(*s.value);
        else
            os << s.status;
        if (s.censoring_epoch) os << " (censored at epoch " << *s.censoring_epoch << ")";
        if (s.lower_bound) os << " (speedup > " << format_real(*s.lower_bound) << ")";
        os << '\n';
    };
    if (r.threshold) print("speedup", r.threshold_speedup);
    print("convergence speedup", r.convergence_speedup);
    for (const auto& w : r.warnings) os << "warning: " << w << '\n';
}

/// Run every arm of the config and, when `write_files` is set, write
/// trace CSVs, the snapshot table and metadata.json into c.out_dir.
inline ComparisonReport run_experiment(const ExperimentConfig& c, bool write_files = true) {
    const ExperimentSetup s = build_setup(c);
    const RunContext ctx = resolve(c, s);
    validate(SgdConfig{ctx.step_size, c.opt.k, c.opt.minibatch}, *s.problem);
    (void)schedule_for(c, ctx);

    ComparisonReport rep;
    rep.experiment = std::string(to_string(c.experiment));
    rep.metric = s.metric_name;
    rep.threshold = c.threshold;
    rep.step_size = ctx.step_size;
    rep.L_tilde = ctx.L_tilde;
    rep.sigma2_hat = ctx.sigma2_hat;
    rep.fstar = s.fstar;
    rep.warnings = ctx.warnings;
    for (const auto& m : detail::methods(c.method)) rep.arms.push_back(run_arm(m, c, s, ctx));
    rep.threshold_speedup = compare_epochs(rep.arm("sgd"), rep.arm("hsgd"), &ArmReport::epochs_to_threshold);
    rep.convergence_speedup = compare_epochs(rep.arm("sgd"), rep.arm("hsgd"), &ArmReport::convergence_epoch);
    if (!c.threshold) rep.threshold_speedup.status = "unavailable";

    if (!write_files) return rep;
    namespace fs = std::filesystem;
    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());

    auto open = [&](const std::string& name) {
        std::ofstream f(dir / name, std::ios::binary | std::ios::trunc);
        if (!f) throw ConfigError("cannot write " + (dir / name).string());
        return f;
    };
    json files = json::object();
    for (const auto& a : rep.arms) {
        if (a.failed) continue;
        const std::string name = "trace_" + a.method + ".csv";
        auto f = open(name);
        write_trace_csv(f, a.trace);
        files[a.method] = name;
        if (!a.snapshots.empty()) {
            auto g = open("snapshots_" + a.method + ".csv");
            write_snapshot_csv(g, a.snapshots);
            files["snapshots_" + a.method] = "snapshots_" + a.method + ".csv";
        }
    }

    json meta;
    meta["config"] = to_json(c);
    meta["library_version"] = library_version;
    meta["step_size"] = ctx.step_size;
    meta["L_tilde"] = ctx.L_tilde ? json(*ctx.L_tilde) : json(nullptr);
    meta["sigma2_hat"] = ctx.sigma2_hat ? json(*ctx.sigma2_hat) : json(nullptr);
    meta["fstar"] = s.fstar ? json(*s.fstar) : json(nullptr);
    meta["eta"] = ctx.eta ? json(*ctx.eta) : json(nullptr);
    std::vector<std::uint64_t> seeds(c.repeats);
    for (std::size_t r = 0; r < c.repeats; ++r) seeds[r] = repeat_stream_seed(c.master_seed, r);
    meta["repeat_seeds"] = seeds;
    meta["files"] = files;
    meta["report"] = report_json(rep);
    meta["warnings"] = ctx.warnings;
    auto m = open("metadata.json");
    m << meta.dump(2) << '\n';
    return rep;
}

}  // namespace hsgd::harness
