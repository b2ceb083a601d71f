// Command-line front end: run, theory, diagnose, gen-data.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "hsgd/harness/config.hpp"
#include "hsgd/harness/diagnose.hpp"
#include "hsgd/harness/experiment.hpp"
#include "hsgd/harness/setup.hpp"
#include "hsgd/theory/report.hpp"

namespace {

enum ExitCode : int { ok = 0, config_error = 2, infeasible = 3, runtime_failure = 4 };

using hsgd::harness::json;

json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hsgd::ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw hsgd::ConfigError(path + ": " + e.what());
    }
}

hsgd::harness::ExperimentConfig load_config(const std::string& path, std::optional<std::uint64_t> seed) {
    auto c = hsgd::harness::parse_config(read_json(path));
    if (seed) {
        c.master_seed = *seed;
        c.data.seed = *seed;
    }
    return c;
}

json theory_json(const hsgd::theory::TheoryReport& rep) {
    json checks = json::array();
    for (const auto& c : rep.checks) {
        checks.push_back({{"key", c.key},
                          {"condition", c.condition},
                          {"value", c.value},
                          {"lower", c.lower ? json(*c.lower) : json(nullptr)},
                          {"upper", c.upper ? json(*c.upper) : json(nullptr)},
                          {"pass", c.pass},
                          {"gating", c.gating}});
    }
    json values = json::object();
    for (const auto& [k, v] : rep.values) values[k] = v;
    return {{"checks", checks},
            {"values", values},
            {"gap_bound", rep.gap_curve},
            {"notes", rep.notes},
            {"feasible", rep.feasible()}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Homotopy-SGD experiments and bound calculators"};
    app.require_subcommand(1);
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "Override the master seed (and dataset seed)");

    std::string config_path, constants_path, out_dir;
    std::optional<std::size_t> repeats;
    bool echo_json = false;

    auto* run = app.add_subcommand("run", "Run SGD and/or H-SGD arms and write traces");
    run->add_option("--config", config_path, "Config or metadata JSON")->required();
    run->add_option("--repeats", repeats, "Override the repeat count");
    run->add_option("--out", out_dir, "Override the output directory");
    run->add_option("--seed", seed, "Override the master seed (and dataset seed)");

    auto* theory = app.add_subcommand("theory", "Evaluate bound calculators on a constants file");
    theory->add_option("--constants", constants_path, "TheoryConstants JSON")->required();
    theory->add_flag("--json", echo_json, "Also print the report as JSON");
    theory->add_option("--seed", seed, "Accepted for uniformity; unused");

    auto* diagnose = app.add_subcommand("diagnose", "Estimate landscape constants");
    diagnose->add_option("--config", config_path, "Config JSON")->required();
    diagnose->add_option("--out", out_dir, "Override the output directory");
    diagnose->add_option("--seed", seed, "Override the master seed (and dataset seed)");

    auto* gen = app.add_subcommand("gen-data", "Write the experiment's dataset as CSV");
    gen->add_option("--config", config_path, "Config JSON")->required();
    gen->add_option("--out", out_dir, "Override the output directory");
    gen->add_option("--seed", seed, "Override the dataset seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? ok : config_error;
    }

    try {
        if (*theory) {
            const auto constants = hsgd::harness::parse_constants(read_json(constants_path));
            const auto rep = hsgd::theory::evaluate(constants);
            hsgd::theory::write_text(std::cout, rep);
            if (echo_json) std::cout << theory_json(rep).dump(2) << '\n';
            return rep.feasible() ? ok : infeasible;
        }

        auto c = load_config(config_path, seed);
        if (!out_dir.empty()) c.out_dir = out_dir;

        if (*run) {
            if (repeats) c.repeats = *repeats;
            hsgd::harness::validate(c);
            const auto rep = hsgd::harness::run_experiment(c);
            hsgd::harness::write_summary(std::cout, rep);
            return rep.any_failed() ? runtime_failure : ok;
        }
        if (*diagnose) {
            const auto est = hsgd::harness::run_diagnose(c);
            hsgd::write_text(std::cout, est);
            hsgd::harness::write_diagnose_files(c, est);
            return est.errors.empty() ? ok : runtime_failure;
        }
        if (*gen) {
            hsgd::harness::validate(c);
            const auto data = hsgd::harness::make_dataset(c);
            std::filesystem::create_directories(c.out_dir);
            const auto path = std::filesystem::path(c.out_dir) / (std::string(to_string(c.experiment)) + ".csv");
            std::ofstream f(path, std::ios::binary | std::ios::trunc);
            if (!f) throw hsgd::ConfigError("cannot write " + path.string());
            hsgd::write_csv(f, data);
            std::cout << path.string() << '\n';
            return ok;
        }
    } catch (const hsgd::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return config_error;
    } catch (const hsgd::InfeasibleError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return infeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return runtime_failure;
    }
    return ok;
}
