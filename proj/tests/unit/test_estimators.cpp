#include "isac/array_geometry.hpp"
#include "isac/crb_metrics.hpp"
#include "isac/estimators.hpp"
#include "isac/quantization.hpp"
#include "isac/structured.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace isac;

TEST(Estimators, ExactCzzMatchesArcsineOfEcho) {
    const ArrayDims d{3, 2, 2};
    Rng rng(1);
    const CVec x = rng.cnormal_vec(d.tx_len());
    const CMat c = crr_pt(x, d, {0.4, 0.8}, 0.3).dense().c_rr;
    EXPECT_LT((pt_czz_exact(x, d, 0.4, 0.8, 0.3) - covariance_czz_exact(c)).norm(), 1e-14);
}

TEST(Estimators, MleObjectiveMatchesDirectEvaluation) {
    const ArrayDims d{3, 3, 2};
    Rng rng(2);
    const CVec x = rng.cnormal_vec(d.tx_len()) / 2.0;
    const PtMleSearcher s(x, d, 1.0, 0.1);
    const CVec z = quantize_one_bit(rng.cnormal_vec(6));
    for (double th : {-0.7, 0.0, 0.9}) {
        const CMat c = pt_czz_exact(x, d, th, 1.0, 0.1);
        const Eigen::LLT<CMat> llt(c);
        const double direct = z.dot(llt.solve(z)).real() + 2 * llt.matrixL().toDenseMatrix().diagonal().real().array().log().sum();
        EXPECT_NEAR(s.objective(z, th), direct, 1e-9 * std::abs(direct));
    }
    const auto& g = s.coarse_grid();
    EXPECT_DOUBLE_EQ(g.front(), -kPi / 2);
    EXPECT_DOUBLE_EQ(g.back(), kPi / 2);
}

TEST(Estimators, MleReturnsGridMinimizer) {
    const ArrayDims d{4, 4, 4};
    Rng rng(3);
    CVec x = rng.cnormal_vec(d.tx_len());
    x /= x.norm();
    const PtMleSearcher s(x, d, 1.0, 1e-2);
    for (int t = 0; t < 5; ++t) {
        const CVec z = quantize_one_bit(rng.cnormal_vec(16));
        const double est = s.estimate(z);
        const double fe = s.objective(z, est);
        for (std::size_t i = 0; i < s.coarse_grid().size(); ++i)
            EXPECT_LE(fe, s.coarse_objective(z, static_cast<int>(i)) + 1e-12);
    }
}

TEST(Estimators, MleMseNearCrb) {
    const ArrayDims d{8, 8, 10};
    const PtTarget tg{30.0 * kPi / 180.0, 1.0};
    Rng rng(4);
    CVec x = rng.cnormal_vec(d.tx_len());
    x /= x.norm();
    const double sv = 1e-3;
    const MseSummary m = run_trials_pt(x, d, tg, sv, 60, 1000);
    EXPECT_EQ(m.n_failed, 0);
    const double crb = crb_pt(x, d, tg, sv);
    EXPECT_LT(std::abs(10 * std::log10(m.mean / crb)), 1.5);
}

TEST(Estimators, BlmmseAnalyticMse) {
    Rng rng(5);
    const CMat x = rng.cnormal_mat(2, 3) * 0.5;
    const EtTarget t = make_et_target(tu::random_hpd(rng, 2), tu::random_hpd(rng, 2));
    const double sv = 0.2;
    const BlmmseEstimator e(x, t.c_aa, sv);
    // Direct formula with dense X~.
    const CMat xt = xtilde_dense(x, 2);
    const CMat c_rr = xt * t.c_aa * xt.adjoint() + sv * CMat::Identity(6, 6);
    const CMat czz = covariance_czz_exact(c_rr);
    const RVec f = bussgang_gain(c_rr);
    const CMat c_za = f.asDiagonal() * xt * t.c_aa;
    const CMat gain = (czz.ldlt().solve(c_za)).adjoint();
    EXPECT_LT((e.gain() - gain).norm(), 1e-10 * gain.norm());
    const double mse = t.c_aa.trace().real() - (gain * c_za).trace().real();
    EXPECT_NEAR(e.analytic_mse(), mse, 1e-10);
    const CVec z = quantize_one_bit(rng.cnormal_vec(6));
    EXPECT_LT((blmmse_et(z, x, t.c_aa, sv) - gain * z).norm(), 1e-10);
}

TEST(Estimators, EtMonteCarloMatchesAnalytic) {
    const EtTarget t = make_et_target(exponential_correlation(2, 0.5), exponential_correlation(2, 0.5));
    Rng rng(6);
    const CMat x = rng.cnormal_mat(2, 4) / std::sqrt(8.0);
    const double sv = 0.05;
    const MseSummary m = run_trials_et(x, t, sv, 4000, 77);
    const double expect = BlmmseEstimator(x, t.c_aa, sv).analytic_mse() / t.c_aa.trace().real();
    EXPECT_NEAR(m.mean, expect, 4 * m.std_error);
}

TEST(Estimators, TrialsAreDeterministicAndThreadInvariant) {
    const EtTarget t = make_et_target(exponential_correlation(2, 0.5), exponential_correlation(2, 0.5));
    Rng rng(7);
    const CMat x = rng.cnormal_mat(2, 4);
    const MseSummary a = run_trials_et(x, t, 0.1, 50, 9, 1);
    const MseSummary b = run_trials_et(x, t, 0.1, 50, 9, 3);
    EXPECT_EQ(a.mean, b.mean);
    EXPECT_EQ(a.std_error, b.std_error);
}

TEST(Estimators, SummaryStatistics) {
    std::vector<TrialRecord> r(4);
    const double e[] = {1.0, 2.0, 3.0, 4.0};
    for (int i = 0; i < 4; ++i)
        r[i].squared_error = e[i];
    r.push_back(TrialRecord{0, 0, 0, 0, true});
    const MseSummary s = summarize(r, 2.0);
    EXPECT_EQ(s.n_ok, 4);
    EXPECT_EQ(s.n_failed, 1);
    EXPECT_DOUBLE_EQ(s.mean, 1.25);
    EXPECT_NEAR(s.std_error, std::sqrt((5.0 / 3.0) / 4.0) / 2.0, 1e-12);
}
