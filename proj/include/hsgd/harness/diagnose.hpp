#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <vector>

#include "hsgd/diagnostics/estimators.hpp"
#include "hsgd/diagnostics/landscape.hpp"
#include "hsgd/harness/config.hpp"
#include "hsgd/harness/setup.hpp"

namespace hsgd::harness {

struct DiagnoseSettings {
    double mu_lo = -6.0;
    double mu_hi = 6.0;
    double mu_step = 0.01;
    std::size_t delta_probes = 1000;
    std::size_t pl_draws = 1000;
    double sampler_stddev = 1.0;
};

/// Landscape estimates for the config's problem at c.lambda. Every
/// estimator runs even if an earlier one failed.
inline LandscapeEstimates run_diagnose(const ExperimentConfig& c, const DiagnoseSettings& ds = {}) {
    const ExperimentSetup s = build_setup(c);
    const auto& p = *s.problem;
    const double lambda = c.lambda;
    const ParamVector w_init = s.init(repeat_stream_seed(c.master_seed, 0));
    Rng rng(derive_seed(c.master_seed, stream_tag::estimator));
    LandscapeEstimates out;
    out.set("lambda", lambda);
    out.set("dimension", static_cast<double>(p.dimension()));
    out.set("samples", static_cast<double>(p.sample_count()));

    auto attempt = [&](const char* key, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            out.fail(key, e.what());
        }
    };

    attempt("L_hat", [&] { out.set("L_hat", estimate_L(p, lambda, c.opt.l_pairs, c.opt.l_radius, rng, w_init)); });
    attempt("sigma2_hat", [&] {
        const std::vector<ParamVector> at{w_init};
        out.set("sigma2_hat", estimate_sigma2(p, lambda, at, c.opt.minibatch, c.opt.sigma2_draws, rng));
    });

    std::optional<double> fstar;
    attempt("fstar", [&] {
        FstarSearch search = GridSearch{};
        if (p.dimension() != 1) {
            MultiStartDescent ms;
            ms.center = w_init;
            ms.seed = derive_seed(c.master_seed, stream_tag::estimator);
            search = ms;
        }
        const auto est = estimate_fstar(p, lambda, search);
        fstar = est.value;
        out.set("fstar", est.value);
        out.set("fstar_upper_bound_only", est.upper_bound_only ? 1.0 : 0.0);
    });

    if (fstar) {
        attempt("mu_hat_w0", [&] { out.set("mu_hat_w0", estimate_mu(p, lambda, w_init, *fstar)); });
        if (p.dimension() == 1) {
            attempt("mu_profile", [&] {
                out.mu_curve = mu_profile(p, lambda, ds.mu_lo, ds.mu_hi, ds.mu_step, *fstar);
                if (out.mu_curve.empty()) throw EstimationError("mu_profile: no grid point above the optimum");
                const auto [lo, hi] = std::minmax_element(out.mu_curve.begin(), out.mu_curve.end(),
                                                          [](const auto& a, const auto& b) { return a.mu < b.mu; });
                out.set("mu_profile_min", lo->mu);
                out.set("mu_profile_max", hi->mu);
                out.set("mu_profile_argmax", hi->w);
            });
        }
        attempt("pl_probe", [&] {
            const auto r = expected_pl_probe(p, lambda, GaussianSampler{w_init, ds.sampler_stddev}, ds.pl_draws,
                                             *fstar, rng);
            out.set("pl_probe_ratio", r.ratio);
            out.set("pl_probe_mean_sq_grad", r.mean_sq_grad);
            out.set("pl_probe_mean_gap", r.mean_gap);
        });
    }
    attempt("delta_hat", [&] {
        out.set("delta_hat", estimate_delta(p, GaussianSampler{w_init, ds.sampler_stddev}, ds.delta_probes, rng));
    });
    return out;
}

/// Writes landscape.txt and, for 1-D problems, mu_profile.csv.
inline void write_diagnose_files(const ExperimentConfig& c, const LandscapeEstimates& e) {
    namespace fs = std::filesystem;
    const fs::path dir(c.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir.string());
    std::ofstream t(dir / "landscape.txt", std::ios::binary | std::ios::trunc);
    write_text(t, e);
    if (!e.mu_curve.empty()) {
        std::ofstream m(dir / "mu_profile.csv", std::ios::binary | std::ios::trunc);
        write_mu_csv(m, e.mu_curve);
    }
}

}  // namespace hsgd::harness
