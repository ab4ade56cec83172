#include "isac/bench/config.hpp"
#include "isac/bench/experiments.hpp"
#include "isac/bench/table.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <iostream>
#include <string>

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

int threads_from_env() {
    const char* env = std::getenv("ISAC_BENCH_THREADS");
    if (!env || !*env)
        return 1;
    try {
        const int n = std::stoi(env);
        if (n < 1)
            throw std::invalid_argument("must be >= 1");
        return n;
    } catch (const std::exception&) {
        throw std::invalid_argument(std::string("ISAC_BENCH_THREADS: invalid value '") + env + "'");
    }
}

}  // namespace

int main(int argc, char** argv) {
    using namespace isac::bench;

    CLI::App app{"Waveform design benchmarks for one-bit ISAC"};
    std::string config_path, experiment, out, format;
    std::uint64_t seed = 0;
    int trials = 0, threads = 0;
    bool with_timing = false, print_config = false;
    app.add_option("--config", config_path, "JSON experiment config");
    app.add_option("--experiment", experiment,
                   "convergence | pt_sweep | et_sweep | tradeoff | timing (smoke preset without --config)");
    app.add_option("--out", out, "output file");
    app.add_option("--format", format, "csv | json (default csv)");
    auto* seed_opt = app.add_option("--seed", seed, "base seed");
    auto* trials_opt = app.add_option("--trials", trials, "Monte-Carlo trials per point")->check(CLI::PositiveNumber);
    auto* threads_opt = app.add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--with-timing", with_timing, "add wall-clock rows and column (output no longer deterministic)");
    app.add_flag("--print-config", print_config, "print the resolved config as JSON and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    ExperimentConfig cfg;
    Format fmt = Format::Csv;
    RunOptions opt;
    try {
        if (!config_path.empty()) {
            cfg = load_config(config_path);
            if (!experiment.empty() && parse_kind(experiment) != cfg.kind)
                throw std::invalid_argument("--experiment " + experiment + " does not match config experiment " +
                                            kind_name(cfg.kind));
        } else if (!experiment.empty()) {
            cfg = smoke_preset(parse_kind(experiment));
        } else {
            throw std::invalid_argument("one of --config or --experiment is required");
        }
        if (*seed_opt)
            cfg.seed = seed;
        if (*trials_opt)
            cfg.trials = trials;
        cfg.validate();
        if (out.empty())
            out = cfg.output;
        if (format.empty())
            format = out.size() > 5 && out.substr(out.size() - 5) == ".json" ? "json" : "csv";
        fmt = parse_format(format);
        opt.threads = *threads_opt ? threads : threads_from_env();
        opt.with_timing = with_timing;
        if (print_config) {
            std::cout << config_to_json(cfg);
            return 0;
        }
        if (out.empty())
            throw std::invalid_argument("--out is required (or set 'output' in the config)");
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    }

    try {
        const ExperimentResult res = run_experiment(cfg, opt);
        std::cerr << res.summary << "\n";
        for (const auto& m : res.messages)
            std::cerr << "aborted: " << m << "\n";
        emit(res.table, fmt, out);
        if (res.aborted > 0)
            return kExitRuntime;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
