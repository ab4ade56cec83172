#pragma once

#include "isac/admm.hpp"
#include "isac/scenario.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace isac::bench {

enum class ExperimentKind { Convergence, PtSweep, EtSweep, Tradeoff, Timing };

const char* kind_name(ExperimentKind k);
ExperimentKind parse_kind(const std::string& s);

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
    int schema_version = kSchemaVersion;
    ExperimentKind kind = ExperimentKind::Convergence;
    ScenarioParams scenario;
    std::vector<double> snr_db{30.0};     // sensing SNR points (sweeps)
    std::vector<double> epsilon{1e-2};    // SEP targets (convergence, tradeoff)
    std::vector<Variant> variants{Variant::PT};
    int trials = 500;                     // Monte-Carlo trials per point (sweeps)
    int instances = 1;                    // channel realizations (timing)
    std::uint64_t seed = 1;
    int inner_max_iter = 300;             // MM budget for estimation-only designs
    double inner_tol = 1e-8;
    std::optional<AdmmConfig> admm;       // overrides the per-variant defaults
    std::string output;                   // optional default output path

    void validate() const;
    AdmmConfig admm_for(Variant v) const;
};

/// Parses the JSON config text. Throws std::invalid_argument on any schema error.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
std::string config_to_json(const ExperimentConfig& c);

/// Small preset per experiment kind, each finishing in well under a minute.
ExperimentConfig smoke_preset(ExperimentKind k);

}  // namespace isac::bench
