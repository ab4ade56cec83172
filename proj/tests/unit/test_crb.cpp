#include "isac/array_geometry.hpp"
#include "isac/crb_metrics.hpp"
#include "isac/structured.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace isac;

TEST(CrbPt, StructuredMatchesDense) {
    for (int s = 0; s < 10; ++s) {
        Rng rng(10 + s);
        const ArrayDims d{4, 3, 3};
        const PtTarget tg{(rng.uniform() - 0.5) * 2.0, 0.5 + rng.uniform()};
        const CVec x = tu::random_in_ball(rng, d.tx_len(), 1.0);
        const double sv = 0.01 + rng.uniform();
        const double a = crb_pt(x, d, tg, sv);
        const double b = crb_pt_dense(x, d, tg, sv);
        EXPECT_NEAR(a, b, 1e-9 * b);
    }
}

TEST(CrbPt, InfiniteResolutionMatchesDenseFisher) {
    Rng rng(20);
    const ArrayDims d{3, 3, 2};
    const PtTarget tg{0.2, 1.0};
    const CVec x = rng.cnormal_vec(d.tx_len());
    const double sv = 0.3;
    const CVec y = pt_response_operator(d, tg.theta).apply(x);
    const CVec dy = pt_response_derivative_operator(d, tg.theta).apply(x);
    const int n = static_cast<int>(y.size());
    const CMat c = y * y.adjoint() + sv * CMat::Identity(n, n);
    const CMat dc = dy * y.adjoint() + y * dy.adjoint();
    const CMat k = c.ldlt().solve(dc);
    const double fisher = (k * k).trace().real();
    EXPECT_NEAR(crb_pt_infinite_resolution(x, d, tg, sv), 1.0 / fisher, 1e-9 / fisher);
}

TEST(CrbPt, ZeroWaveformIsInfinite) {
    const ArrayDims d{2, 2, 2};
    EXPECT_EQ(crb_pt(CVec::Zero(4), d, {0.3, 1.0}, 0.1), kInfiniteCrb);
}

TEST(CrbPt, OneBitPenaltyAtLowSnr) {
    const ArrayDims d{8, 8, 10};
    const PtTarget tg{30.0 * kPi / 180.0, 1.0};
    Rng rng(30);
    CVec x = rng.cnormal_vec(d.tx_len());
    x /= x.norm();
    // Per-sample SNR far below 0 dB.
    const double sv = 1e3;
    const double ratio = crb_pt(x, d, tg, sv) / crb_pt_infinite_resolution(x, d, tg, sv);
    EXPECT_GE(ratio, kPi / 2 * 0.85);
    EXPECT_LE(ratio, kPi / 2 * 1.15);
}

TEST(CrbPt, OneBitNeverBeatsInfiniteResolution) {
    for (int s = 0; s < 10; ++s) {
        Rng rng(40 + s);
        const ArrayDims d{3, 3, 2};
        const PtTarget tg{0.5, 1.0};
        const CVec x = tu::random_in_ball(rng, d.tx_len(), 1.0);
        const double sv = 0.01 + rng.uniform();
        EXPECT_GE(crb_pt(x, d, tg, sv), crb_pt_infinite_resolution(x, d, tg, sv) * (1 - 1e-12));
    }
}

TEST(CrbEt, FormsAgree) {
    for (int s = 0; s < 10; ++s) {
        Rng rng(50 + s);
        const CMat x = rng.cnormal_mat(3, 4) * 0.3;
        const EtTarget t = make_et_target(tu::random_hpd(rng, 2), tu::random_hpd(rng, 3));
        const double sv = 0.01 + rng.uniform();
        const FormsAgreement f = crb_et_forms_equal(x, t.c_aa, sv);
        EXPECT_TRUE(f.agree) << f.max_relative_gap;
        EXPECT_LT(f.max_relative_gap, 1e-9);
    }
}

TEST(CrbEt, BoundedByPriorTrace) {
    Rng rng(60);
    const EtTarget t = make_et_target(exponential_correlation(3, 0.5), exponential_correlation(2, 0.5));
    EXPECT_NEAR(crb_et(CMat::Zero(2, 3), t.c_aa, 0.1), t.c_aa.trace().real(), 1e-12);
    const CMat x = rng.cnormal_mat(2, 3);
    const double c = crb_et(x, t.c_aa, 0.1);
    EXPECT_GT(c, 0.0);
    EXPECT_LT(c, t.c_aa.trace().real());
}

TEST(CrbEt, DecreasesWithSnr) {
    Rng rng(70);
    const EtTarget t = make_et_target(exponential_correlation(4, 0.5), exponential_correlation(4, 0.5));
    CMat x = rng.cnormal_mat(4, 8);
    x /= x.norm();
    double prev = 1e300;
    for (double snr_db : {0.0, 10.0, 20.0, 30.0}) {
        const double c = crb_et(x, t.c_aa, std::pow(10.0, -snr_db / 10));
        EXPECT_LT(c, prev);
        prev = c;
    }
}

TEST(CrbEt, QuantizationUnawareMse) {
    Rng rng(80);
    const CMat x = rng.cnormal_mat(2, 3);
    const EtTarget t = make_et_target(tu::random_hpd(rng, 2), tu::random_hpd(rng, 2));
    const CMat xt = xtilde_dense(x, 2);
    const CMat l = xt * t.c_aa;
    const CMat m = xt * t.c_aa * xt.adjoint() + 0.2 * CMat::Identity(xt.rows(), xt.rows());
    const double expect = t.c_aa.trace().real() - (l.adjoint() * m.ldlt().solve(l)).trace().real();
    EXPECT_NEAR(mse_et_quantization_unaware(x, t.c_aa, 0.2), expect, 1e-10);
    EXPECT_LT(mse_et_quantization_unaware(x, t.c_aa, 0.2), crb_et(x, t.c_aa, 0.2));
}
