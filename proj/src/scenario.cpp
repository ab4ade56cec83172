#include "isac/scenario.hpp"

namespace isac {

void ScenarioParams::validate() const {
    ArrayDims{n_t, n_r, l}.validate();
    require(k >= 0, "scenario: number of users must be >= 0");
    validate_qam_order(order);
    require(power > 0.0, "scenario: power must be positive");
    require(epsilon > 0.0 && epsilon < 1.0, "scenario: epsilon must lie in (0, 1)");
    require(std::abs(theta_deg) <= 90.0, "scenario: theta must lie in [-90, 90] degrees");
    require(sigma_alpha_sq >= 0.0, "scenario: sigma_alpha^2 must be >= 0");
    require(correlation >= 0.0 && correlation < 1.0, "scenario: correlation must lie in [0, 1)");
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

Scenario make_scenario(const ScenarioParams& p, std::uint64_t seed) {
    p.validate();
    Scenario sc;
    sc.params = p;
    sc.dims = {p.n_t, p.n_r, p.l};
    sc.power = p.power;
    sc.sigma_v_sq = p.power / db_to_linear(p.snr_sensing_db);
    sc.sigma_w = std::sqrt(p.power / db_to_linear(p.snr_comm_db));
    sc.pt = {p.theta_deg * kPi / 180.0, p.sigma_alpha_sq};
    sc.et = make_et_target(exponential_correlation(p.n_r, p.correlation),
                           exponential_correlation(p.n_t, p.correlation));
    Rng rng(seed);
    sc.h = rng.cnormal_mat(p.k, p.n_t);
    sc.symbols = random_qam(p.k, p.l, p.order, rng);
    sc.sep = build_sep_spec(sc.symbols, p.epsilon, sc.sigma_w);
    return sc;
}

Scenario with_epsilon(const Scenario& sc, double epsilon) {
    Scenario out = sc;
    out.params.epsilon = epsilon;
    out.sep = build_sep_spec(sc.symbols, epsilon, sc.sigma_w);
    return out;
}

Scenario with_sensing_snr(const Scenario& sc, double snr_db) {
    Scenario out = sc;
    out.params.snr_sensing_db = snr_db;
    out.sigma_v_sq = sc.power / db_to_linear(snr_db);
    return out;
}

}  // namespace isac
