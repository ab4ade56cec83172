#pragma once

#include "isac/array_geometry.hpp"
#include "isac/comm_sep.hpp"
#include "isac/core.hpp"

#include <cstdint>

namespace isac {

struct ScenarioParams {
    int n_t = 8;
    int n_r = 8;
    int l = 10;
    int k = 4;
    int order = 16;
    double power = 1.0;
    double snr_sensing_db = 30.0;  // P / sigma_v^2
    double snr_comm_db = 30.0;     // P / sigma_w^2
    double epsilon = 1e-2;
    double theta_deg = 30.0;
    double sigma_alpha_sq = 1.0;
    double correlation = 0.5;  // exponential correlation of the ET prior

    void validate() const;
};

/// One ISAC instance: arrays, target models, channel, symbols and SEP thresholds.
struct Scenario {
    ScenarioParams params;
    ArrayDims dims;
    double power = 1.0;
    double sigma_v_sq = 1.0;
    double sigma_w = 1.0;
    PtTarget pt;
    EtTarget et;
    CMat h;  // K x N_t, i.i.d. CN(0, 1)
    QamSymbols symbols;
    SepSpec sep;

    int users() const { return static_cast<int>(h.rows()); }
};

double db_to_linear(double db);

/// Channel and symbols are drawn from `seed`; the rest is deterministic.
Scenario make_scenario(const ScenarioParams& p, std::uint64_t seed);

/// Same scenario with a different SEP target (keeps H and S).
Scenario with_epsilon(const Scenario& sc, double epsilon);
/// Same scenario with a different sensing SNR.
Scenario with_sensing_snr(const Scenario& sc, double snr_db);

}  // namespace isac
