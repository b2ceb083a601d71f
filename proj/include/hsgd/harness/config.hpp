#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hsgd/core/errors.hpp"
#include "hsgd/optim/schedule.hpp"
#include "hsgd/theory/report.hpp"

namespace hsgd::harness {

using json = nlohmann::json;

enum class ExperimentKind { toy_erf, sine_mlp, moons_logistic, synthetic_lq };
enum class Method { sgd, hsgd, both };

inline std::string_view to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::toy_erf: return "toy-erf";
        case ExperimentKind::sine_mlp: return "sine-mlp";
        case ExperimentKind::moons_logistic: return "moons-logistic";
        case ExperimentKind::synthetic_lq: return "synthetic-lq";
    }
    return "?";
}

inline std::string_view to_string(Method m) {
    switch (m) {
        case Method::sgd: return "sgd";
        case Method::hsgd: return "hsgd";
        case Method::both: return "both";
    }
    return "?";
}

inline ExperimentKind parse_experiment(std::string_view s) {
    for (auto k : {ExperimentKind::toy_erf, ExperimentKind::sine_mlp, ExperimentKind::moons_logistic,
                   ExperimentKind::synthetic_lq})
        if (to_string(k) == s) return k;
    throw ConfigError("unknown experiment '" + std::string(s) + "'");
}

inline Method parse_method(std::string_view s) {
    for (auto m : {Method::sgd, Method::hsgd, Method::both})
        if (to_string(m) == s) return m;
    throw ConfigError("unknown method '" + std::string(s) + "'");
}

struct DatasetSpec {
    std::size_t n = 100;
    double noise_std = 1.0;
    std::uint64_t seed = 0;
    double slope = 3.0;             // toy-erf
    double freq = 10.0;             // sine-mlp
    double source_noise_std = 0.1;  // sine-mlp
    double mu = 1.0;                // synthetic-lq
    double spread = 0.2;            // synthetic-lq
};

struct OptimizerSpec {
    std::optional<double> step_size;  // nullopt = auto, 1 / L~
    std::size_t minibatch = 1;
    std::size_t k = 1;  // SGD steps per homotopy iteration
    std::size_t n = 1;  // homotopy iterations
    ScheduleKind schedule = ScheduleKind::constant;
    std::optional<double> eta;
    std::vector<double> weights;
    std::size_t sgd_steps = 1;  // SGD arm budget
    std::size_t l_pairs = 1000;
    double l_radius = 1.0;
    std::size_t sigma2_draws = 1000;
};

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::toy_erf;
    Method method = Method::both;
    DatasetSpec data;
    OptimizerSpec opt;
    std::optional<std::vector<double>> w0;  // nullopt = seeded per repeat (sine) or zero
    std::size_t repeats = 100;
    std::uint64_t master_seed = 0;
    std::string out_dir = "out";
    std::optional<double> threshold;
    double plateau_tol = 1e-3;
    std::size_t plateau_window = 10;
    std::vector<std::size_t> snapshots;  // homotopy iterations; empty = all
    double lambda = 1.0;                 // diagnose only
    std::optional<theory::TheoryConstants> constants;
};

/// Defaults for each experiment. Every field is materialized into run
/// metadata, so changing a value here never changes an existing replay.
inline ExperimentConfig default_config(ExperimentKind kind) {
    ExperimentConfig c;
    c.experiment = kind;
    auto& d = c.data;
    auto& o = c.opt;
    switch (kind) {
        case ExperimentKind::toy_erf:
            d.n = 100;
            d.noise_std = 1.0;
            o.minibatch = 100;
            o.n = 20;
            o.k = 25;
            o.schedule = ScheduleKind::exponential;
            o.eta = 0.2;
            o.l_radius = 10.0;
            c.w0 = std::vector<double>{-4.0};
            break;
        case ExperimentKind::sine_mlp:
            d.n = 500;
            d.noise_std = std::sqrt(0.1);
            o.step_size = 0.05;
            o.minibatch = 5;
            o.n = 20;
            o.k = 25 * 100;
            o.schedule = ScheduleKind::constant;
            o.l_radius = 1.0;
            c.threshold = 0.1;
            break;
        case ExperimentKind::moons_logistic:
            d.n = 1000;
            d.noise_std = 0.1;
            o.minibatch = 20;
            o.n = 10;
            o.k = 50 * 10;
            o.schedule = ScheduleKind::exponential;
            o.eta = 0.2;
            o.l_radius = 1.0;
            c.w0 = std::vector<double>(9, 0.0);
            c.threshold = 0.1;
            break;
        case ExperimentKind::synthetic_lq:
            d.n = 8;
            d.mu = 1.0;
            d.spread = 0.2;
            o.step_size = 0.5;
            o.minibatch = 2;
            o.n = 10;
            o.k = 5;
            o.schedule = ScheduleKind::constant;
            c.w0 = std::vector<double>{0.0};
            break;
    }
    o.sgd_steps = o.n * o.k;
    return c;
}

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where,
                           std::vector<std::string>& errors) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) errors.push_back(where + ": unknown key '" + key + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where, std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception&) {
        errors.push_back(where + "." + key + ": wrong type");
    }
}

template <class T>
void read(const json& obj, const char* key, std::optional<T>& out, const std::string& where,
          std::vector<std::string>& errors) {
    if (!obj.contains(key)) return;
    if (obj.at(key).is_null()) {
        out.reset();
        return;
    }
    T v{};
    read(obj, key, v, where, errors);
    out = v;
}

inline void throw_if(const std::vector<std::string>& errors) {
    if (errors.empty()) return;
    std::string msg = "invalid configuration:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
}

}  // namespace detail

inline theory::TheoryConstants parse_constants(const json& j) {
    std::vector<std::string> errors;
    if (!j.is_object()) throw ConfigError("constants: expected a JSON object");
    theory::TheoryConstants c;
    struct Field {
        const char* key;
        std::optional<double> theory::TheoryConstants::*member;
    };
    static constexpr Field fields[] = {
        {"L", &theory::TheoryConstants::L},           {"mu", &theory::TheoryConstants::mu},
        {"sigma2", &theory::TheoryConstants::sigma2}, {"delta", &theory::TheoryConstants::delta},
        {"gamma", &theory::TheoryConstants::gamma},   {"B", &theory::TheoryConstants::B},
        {"r", &theory::TheoryConstants::r},           {"alpha", &theory::TheoryConstants::alpha},
        {"rho", &theory::TheoryConstants::rho_value}, {"k", &theory::TheoryConstants::k},
        {"n", &theory::TheoryConstants::n},           {"rho_tilde", &theory::TheoryConstants::rho_tilde},
        {"epsilon0", &theory::TheoryConstants::epsilon0}, {"eta", &theory::TheoryConstants::eta},
        {"epsilon", &theory::TheoryConstants::epsilon},   {"kappa1", &theory::TheoryConstants::kappa1},
        {"kappa2", &theory::TheoryConstants::kappa2},
    };
    std::set<std::string> allowed;
    for (const auto& f : fields) {
        allowed.insert(f.key);
        detail::read(j, f.key, c.*f.member, "constants", errors);
    }
    detail::reject_unknown(j, allowed, "constants", errors);
    detail::throw_if(errors);
    return c;
}

inline json constants_to_json(const theory::TheoryConstants& c) {
    json j = json::object();
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("L", c.L);
    put("mu", c.mu);
    put("sigma2", c.sigma2);
    put("delta", c.delta);
    put("gamma", c.gamma);
    put("B", c.B);
    put("r", c.r);
    put("alpha", c.alpha);
    put("rho", c.rho_value);
    put("k", c.k);
    put("n", c.n);
    put("rho_tilde", c.rho_tilde);
    put("epsilon0", c.epsilon0);
    put("eta", c.eta);
    put("epsilon", c.epsilon);
    put("kappa1", c.kappa1);
    put("kappa2", c.kappa2);
    return j;
}

/// Parse a config document. A run metadata file is accepted too: its
/// "config" member is used.
inline ExperimentConfig parse_config(const json& doc) {
    if (!doc.is_object()) throw ConfigError("config: expected a JSON object");
    const json& j = doc.contains("config") && doc.at("config").is_object() ? doc.at("config") : doc;
    if (!j.contains("experiment") || !j.at("experiment").is_string())
        throw ConfigError("invalid configuration:\n  experiment: required string");
    ExperimentConfig c = default_config(parse_experiment(j.at("experiment").get<std::string>()));

    std::vector<std::string> errors;
    detail::reject_unknown(j,
                           {"experiment", "method", "dataset", "optimizer", "w0", "repeats", "master_seed",
                            "output_dir", "threshold", "plateau", "snapshots", "lambda", "constants"},
                           "config", errors);
    if (j.contains("method")) {
        try {
            c.method = parse_method(j.at("method").get<std::string>());
        } catch (const std::exception& e) {
            errors.push_back(std::string("method: ") + e.what());
        }
    }
    bool sgd_steps_given = false;
    if (j.contains("dataset")) {
        const json& d = j.at("dataset");
        detail::reject_unknown(d, {"n", "noise_std", "seed", "slope", "freq", "source_noise_std", "mu", "spread"},
                               "dataset", errors);
        detail::read(d, "n", c.data.n, "dataset", errors);
        detail::read(d, "noise_std", c.data.noise_std, "dataset", errors);
        detail::read(d, "seed", c.data.seed, "dataset", errors);
        detail::read(d, "slope", c.data.slope, "dataset", errors);
        detail::read(d, "freq", c.data.freq, "dataset", errors);
        detail::read(d, "source_noise_std", c.data.source_noise_std, "dataset", errors);
        detail::read(d, "mu", c.data.mu, "dataset", errors);
        detail::read(d, "spread", c.data.spread, "dataset", errors);
    }
    if (j.contains("optimizer")) {
        const json& o = j.at("optimizer");
        detail::reject_unknown(o,
                               {"step_size", "minibatch", "k", "n", "schedule", "eta", "weights", "sgd_steps",
                                "l_pairs", "l_radius", "sigma2_draws"},
                               "optimizer", errors);
        if (o.contains("step_size")) {
            const json& s = o.at("step_size");
            if (s.is_string() && s.get<std::string>() == "auto")
                c.opt.step_size.reset();
            else if (s.is_number())
                c.opt.step_size = s.get<double>();
            else
                errors.push_back("optimizer.step_size: expected a number or \"auto\"");
        }
        detail::read(o, "minibatch", c.opt.minibatch, "optimizer", errors);
        detail::read(o, "k", c.opt.k, "optimizer", errors);
        detail::read(o, "n", c.opt.n, "optimizer", errors);
        if (o.contains("schedule")) {
            try {
                c.opt.schedule = parse_schedule_kind(o.at("schedule").get<std::string>());
            } catch (const std::exception& e) {
                errors.push_back(std::string("optimizer.schedule: ") + e.what());
            }
        }
        detail::read(o, "eta", c.opt.eta, "optimizer", errors);
        detail::read(o, "weights", c.opt.weights, "optimizer", errors);
        sgd_steps_given = o.contains("sgd_steps");
        detail::read(o, "sgd_steps", c.opt.sgd_steps, "optimizer", errors);
        detail::read(o, "l_pairs", c.opt.l_pairs, "optimizer", errors);
        detail::read(o, "l_radius", c.opt.l_radius, "optimizer", errors);
        detail::read(o, "sigma2_draws", c.opt.sigma2_draws, "optimizer", errors);
    }
    if (!sgd_steps_given) c.opt.sgd_steps = c.opt.n * c.opt.k;
    detail::read(j, "w0", c.w0, "config", errors);
    detail::read(j, "repeats", c.repeats, "config", errors);
    detail::read(j, "master_seed", c.master_seed, "config", errors);
    detail::read(j, "output_dir", c.out_dir, "config", errors);
    detail::read(j, "threshold", c.threshold, "config", errors);
    detail::read(j, "snapshots", c.snapshots, "config", errors);
    detail::read(j, "lambda", c.lambda, "config", errors);
    if (j.contains("plateau")) {
        const json& p = j.at("plateau");
        detail::reject_unknown(p, {"rel_tol", "window"}, "plateau", errors);
        detail::read(p, "rel_tol", c.plateau_tol, "plateau", errors);
        detail::read(p, "window", c.plateau_window, "plateau", errors);
    }
    if (j.contains("constants") && !j.at("constants").is_null()) {
        try {
            c.constants = parse_constants(j.at("constants"));
        } catch (const ConfigError& e) {
            errors.push_back(e.what());
        }
    }
    detail::throw_if(errors);
    return c;
}

/// Structural checks that need no data. Collects every violation.
inline void validate(const ExperimentConfig& c) {
    std::vector<std::string> errors;
    const auto& o = c.opt;
    if (c.repeats < 1) errors.push_back("repeats: must be at least 1");
    if (c.data.n < 1) errors.push_back("dataset.n: must be at least 1");
    if (!(c.data.noise_std >= 0.0)) errors.push_back("dataset.noise_std: must be nonnegative");
    if (c.experiment == ExperimentKind::moons_logistic && c.data.n % 2 != 0)
        errors.push_back("dataset.n: moons needs an even sample count");
    if (o.step_size && !(*o.step_size > 0.0)) errors.push_back("optimizer.step_size: must be positive");
    if (o.minibatch < 1 || o.minibatch > c.data.n)
        errors.push_back("optimizer.minibatch: must lie in [1, dataset.n]");
    if (o.k < 1) errors.push_back("optimizer.k: must be at least 1");
    if (o.n < 1) errors.push_back("optimizer.n: must be at least 1");
    if (o.sgd_steps < 1) errors.push_back("optimizer.sgd_steps: must be at least 1");
    if (o.schedule == ScheduleKind::exponential && !o.eta && !c.constants)
        errors.push_back("optimizer.eta: required for the exponential schedule");
    if (o.eta && !(*o.eta >= 0.0)) errors.push_back("optimizer.eta: must be nonnegative");
    if (o.schedule == ScheduleKind::explicit_list && o.weights.size() != o.n)
        errors.push_back("optimizer.weights: need exactly n entries");
    if (o.l_pairs < 1) errors.push_back("optimizer.l_pairs: must be at least 1");
    if (!(o.l_radius > 0.0)) errors.push_back("optimizer.l_radius: must be positive");
    if (o.sigma2_draws < 2) errors.push_back("optimizer.sigma2_draws: must be at least 2");
    if (c.plateau_window < 1) errors.push_back("plateau.window: must be at least 1");
    if (!(c.plateau_tol > 0.0)) errors.push_back("plateau.rel_tol: must be positive");
    if (!(c.lambda >= 0.0 && c.lambda <= 1.0)) errors.push_back("lambda: must lie in [0, 1]");
    for (auto s : c.snapshots)
        if (s < 1 || s > o.n) errors.push_back("snapshots: iteration " + std::to_string(s) + " outside [1, n]");
    if (c.experiment == ExperimentKind::synthetic_lq && !(c.data.mu > 0.0))
        errors.push_back("dataset.mu: must be positive");
    detail::throw_if(errors);
}

/// Fully materialized config; parse_config(to_json(c)) == c field by field.
inline json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = std::string(to_string(c.experiment));
    j["method"] = std::string(to_string(c.method));
    j["dataset"] = {{"n", c.data.n},
                    {"noise_std", c.data.noise_std},
                    {"seed", c.data.seed},
                    {"slope", c.data.slope},
                    {"freq", c.data.freq},
                    {"source_noise_std", c.data.source_noise_std},
                    {"mu", c.data.mu},
                    {"spread", c.data.spread}};
    json o;
    if (c.opt.step_size)
        o["step_size"] = *c.opt.step_size;
    else
        o["step_size"] = "auto";
    o["minibatch"] = c.opt.minibatch;
    o["k"] = c.opt.k;
    o["n"] = c.opt.n;
    o["schedule"] = std::string(to_string(c.opt.schedule));
    o["eta"] = c.opt.eta ? json(*c.opt.eta) : json(nullptr);
    o["weights"] = c.opt.weights;
    o["sgd_steps"] = c.opt.sgd_steps;
    o["l_pairs"] = c.opt.l_pairs;
    o["l_radius"] = c.opt.l_radius;
    o["sigma2_draws"] = c.opt.sigma2_draws;
    j["optimizer"] = o;
    j["w0"] = c.w0 ? json(*c.w0) : json(nullptr);
    j["repeats"] = c.repeats;
    j["master_seed"] = c.master_seed;
    j["output_dir"] = c.out_dir;
    j["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
    j["plateau"] = {{"rel_tol", c.plateau_tol}, {"window", c.plateau_window}};
    j["snapshots"] = c.snapshots;
    j["lambda"] = c.lambda;
    j["constants"] = c.constants ? constants_to_json(*c.constants) : json(nullptr);
    return j;
}

}  // namespace hsgd::harness
