#include "isac/admm.hpp"
#include "isac/sep_projection.hpp"
#include "isac/structured.hpp"

#include <gtest/gtest.h>

using namespace isac;

namespace {

ScenarioParams et_params() {
    ScenarioParams p;
    p.n_t = 4;
    p.n_r = 4;
    p.l = 8;
    return p;
}

void expect_feasible(const Scenario& sc, const AdmmResult& r) {
    EXPECT_LE(r.x.squaredNorm(), sc.power * (1 + 1e-12));
    const double res = r.trace.residual.back();
    const CMat hx = unvec(htilde_apply(sc.h, r.x), sc.users(), sc.dims.l);
    EXPECT_TRUE(sep_constraints_satisfied(r.u, r.d, sc.sep, 1e-9).ok);
    EXPECT_TRUE(sep_constraints_satisfied(hx, r.d, sc.sep, std::sqrt(res) + 1e-9).ok);
}

}  // namespace

TEST(Admm, InitializationAtFullPowerAndFeasible) {
    const Scenario sc = make_scenario(ScenarioParams{}, 1);
    const AdmmInit a = admm_initialize(sc, 5);
    EXPECT_NEAR(a.x.squaredNorm(), sc.power, 1e-12);
    EXPECT_EQ(a.lambda.norm(), 0.0);
    EXPECT_EQ(a.d, RVec::Constant(2 * sc.users(), sc.sep.gamma));
    EXPECT_TRUE(sep_constraints_satisfied(a.u, a.d, sc.sep, 1e-9).ok);
    const AdmmInit b = admm_initialize(sc, 5);
    EXPECT_EQ(a.x, b.x);
    EXPECT_EQ(a.u, b.u);
    EXPECT_NE(a.x, admm_initialize(sc, 6).x);
}

TEST(Admm, ConfigValidation) {
    AdmmConfig c = AdmmConfig::pt_defaults();
    EXPECT_EQ(c.rho0, 1e2);
    EXPECT_EQ(c.c_rho, 3.0);
    EXPECT_EQ(c.rho_max, 1e12);
    const AdmmConfig e = AdmmConfig::et_defaults();
    EXPECT_EQ(e.rho0, 1.0);
    EXPECT_EQ(e.c_rho, 1.1);
    EXPECT_EQ(e.rho_max, 10.0);
    c.c_rho = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = AdmmConfig::pt_defaults();
    c.rho_max = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    EXPECT_EQ(parse_variant("et_qu"), Variant::ET_QU);
    EXPECT_THROW(parse_variant("nope"), std::invalid_argument);
}

TEST(Admm, RejectsInfeasibleStart) {
    const Scenario sc = make_scenario(ScenarioParams{}, 1);
    AdmmInit a = admm_initialize(sc, 2);
    a.x *= 2.0;
    EXPECT_THROW(admm_run(sc, Variant::PT, AdmmConfig::pt_defaults(), a), std::invalid_argument);
}

TEST(Admm, NoUsersMeansZeroResidual) {
    ScenarioParams p;
    p.n_t = p.n_r = 4;
    p.l = 4;
    p.k = 0;
    const Scenario sc = make_scenario(p, 3);
    AdmmConfig cfg = AdmmConfig::pt_defaults();
    cfg.max_outer = 5;
    const AdmmResult r = admm_run(sc, Variant::PT, cfg, admm_initialize(sc, 4));
    for (double v : r.trace.residual)
        EXPECT_EQ(v, 0.0);
    EXPECT_LT(r.trace.crb.back(), r.trace.crb.front());
}

TEST(Admm, TraceLengthsAgree) {
    const Scenario sc = make_scenario(et_params(), 5);
    AdmmConfig cfg = AdmmConfig::et_defaults();
    cfg.max_outer = 7;
    const AdmmResult r = admm_run(sc, Variant::ET, cfg, admm_initialize(sc, 6));
    const std::size_t n = r.trace.residual.size();
    EXPECT_EQ(r.trace.objective.size(), n);
    EXPECT_EQ(r.trace.crb.size(), n);
    EXPECT_EQ(r.trace.rho.size(), n);
    EXPECT_EQ(r.trace.wall_ms.size(), n);
    for (std::size_t i = 0; i < n; ++i) {
        EXPECT_GE(r.trace.residual[i], 0.0);
        EXPECT_LE(r.trace.rho[i], cfg.rho_max);
    }
}

TEST(Admm, DeskScalePtConverges) {
    const Scenario sc = make_scenario(ScenarioParams{}, 1);
    const AdmmResult r = admm_run(sc, Variant::PT, AdmmConfig::pt_defaults(), admm_initialize(sc, 2));
    EXPECT_FALSE(r.aborted);
    EXPECT_LT(r.trace.residual.back(), 1e-4);
    expect_feasible(sc, r);
    const CMat x = unvec(r.x, sc.dims.n_t, sc.dims.l);
    const RVec ser = empirical_ser(x, sc.h, sc.symbols, r.d, sc.sigma_w, 10000, 9);
    const double eps = sc.params.epsilon;
    const double se = std::sqrt(eps * (1 - eps) / (10000.0 * sc.dims.l));
    for (int k = 0; k < ser.size(); ++k)
        EXPECT_LE(ser(k), eps + 3 * se);
}

TEST(Admm, DeskScaleEtConverges) {
    const Scenario sc = make_scenario(ScenarioParams{}, 1);
    const AdmmResult r = admm_run(sc, Variant::ET, AdmmConfig::et_defaults(), admm_initialize(sc, 2));
    EXPECT_FALSE(r.aborted);
    EXPECT_LT(r.trace.residual.back(), 1e-4);
    expect_feasible(sc, r);
}
