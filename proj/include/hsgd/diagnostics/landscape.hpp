#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "hsgd/data/datasets.hpp"
#include "hsgd/diagnostics/estimators.hpp"

namespace hsgd {

/// Flat key-value record of landscape estimates. Estimators that failed
/// leave an entry under `errors` and no value.
struct LandscapeEstimates {
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, std::string>> errors;
    std::vector<MuSample> mu_curve;

    void set(std::string key, double v) { values.emplace_back(std::move(key), v); }
    void fail(std::string key, std::string msg) { errors.emplace_back(std::move(key), std::move(msg)); }

    const double* get(const std::string& key) const {
        for (const auto& [k, v] : values)
            if (k == key) return &v;
        return nullptr;
    }
};

/// `key = value` lines; failures as `error.key = message`.
inline void write_text(std::ostream& os, const LandscapeEstimates& e) {
    for (const auto& [k, v] : e.values) os << k << " = " << format_real(v) << '\n';
    for (const auto& [k, m] : e.errors) os << "error." << k << " = " << m << '\n';
}

inline void write_mu_csv(std::ostream& os, const std::vector<MuSample>& curve) {
    os << "w,mu\n";
    for (const auto& s : curve) os << format_real(s.w) << ',' << format_real(s.mu) << '\n';
}

}  // namespace hsgd
