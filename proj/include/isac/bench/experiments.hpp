#pragma once

#include "isac/bench/config.hpp"
#include "isac/bench/table.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isac::bench {

struct RunOptions {
    int threads = 1;
    bool with_timing = false;  // adds wall-clock rows and the wall_ms column
};

struct ExperimentResult {
    ResultTable table;
    int aborted = 0;                    // sub-runs that aborted or threw
    std::vector<std::string> messages;  // one per aborted sub-run
    std::string summary;
};

/// Mixes a base seed with job coordinates.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

/// Runs every point of the experiment. Points fan out over `threads` workers;
/// each point owns a pre-assigned seed, so output does not depend on threads.
ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {});

}  // namespace isac::bench
