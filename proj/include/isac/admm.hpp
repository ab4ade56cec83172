#pragma once

#include "isac/core.hpp"
#include "isac/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace isac {

enum class Variant { PT, ET, ET_QU, PT_INF };

const char* variant_name(Variant v);
Variant parse_variant(const std::string& s);

struct AdmmConfig {
    double rho0 = 1e2;
    double c_rho = 3.0;
    double rho_max = 1e12;
    double tol_residual = 1e-4;
    double tol_objective = 1e-4;
    int max_outer = 200;
    int max_inner = 20;
    double inner_tol = 1e-6;

    static AdmmConfig pt_defaults() { return {}; }
    static AdmmConfig et_defaults() {
        AdmmConfig c;
        c.rho0 = 1.0;
        c.c_rho = 1.1;
        c.rho_max = 10.0;
        return c;
    }
    static AdmmConfig defaults_for(Variant v) {
        return (v == Variant::ET || v == Variant::ET_QU) ? et_defaults() : pt_defaults();
    }
    void validate() const;
};

struct AdmmTrace {
    std::vector<double> residual;   // ||H~ x - u||^2
    std::vector<double> objective;  // the variant's own objective
    std::vector<double> crb;        // one-bit CRB (PT) or normalized one-bit CRB (ET)
    std::vector<double> rho;
    std::vector<double> wall_ms;
};

struct AdmmInit {
    CVec x;
    CMat u;       // K x L
    RVec d;       // 2K
    CVec lambda;  // K L
};

/// x at full power in a random direction, lambda = 0, d = gamma 1, u = clamp of H x.
AdmmInit admm_initialize(const Scenario& sc, std::uint64_t seed);

struct AdmmResult {
    CVec x;
    CMat u;
    RVec d;
    CVec lambda;
    AdmmTrace trace;
    int outer_iterations = 0;
    bool converged = false;
    bool aborted = false;
    std::string message;
};

/// The variant's own objective at x (one-bit CRB, infinite-resolution CRB,
/// or normalized ET bound / quantization-unaware MSE).
double variant_objective(const Scenario& sc, Variant v, const CVec& x);
/// One-bit CRB used to compare variants (normalized by tr(C_aa) for ET).
double variant_crb(const Scenario& sc, Variant v, const CVec& x);

AdmmResult admm_run(const Scenario& sc, Variant v, const AdmmConfig& cfg, const AdmmInit& init);

}  // namespace isac
