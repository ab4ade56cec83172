#include "isac/array_geometry.hpp"
#include "isac/linalg.hpp"
#include "isac/opt_et.hpp"
#include "isac/structured.hpp"
#include "test_util.hpp"

#include <gtest/gtest.h>

using namespace isac;

namespace {

struct EtInstance {
    EtProblem pb;
    CVec x_t;
    Penalty pen;
};

EtInstance make_et(std::uint64_t seed, ArrayDims dims = {2, 2, 2}, int k = 2,
                   EtModel model = EtModel::one_bit()) {
    Rng rng(seed);
    EtInstance in;
    in.pb.dims = dims;
    in.pb.c_aa = make_et_target(tu::random_hpd(rng, dims.n_r), tu::random_hpd(rng, dims.n_t)).c_aa;
    in.pb.sigma_v_sq = 0.05 + rng.uniform();
    in.pb.power = 1.0;
    in.pb.h = rng.cnormal_mat(k, dims.n_t);
    in.pb.model = model;
    in.x_t = tu::random_in_ball(rng, dims.tx_len(), 1.0);
    in.pen.rho = rng.uniform() * 2.0;
    in.pen.target = rng.cnormal_vec(k * dims.l);
    return in;
}

}  // namespace

TEST(Commutation, PermutesToTranspose) {
    Rng rng(1);
    const CMat a = rng.cnormal_mat(3, 4);
    const CommutationOp t(3, 4);
    EXPECT_LT((t.apply(vec(a)) - vec(a.transpose())).norm(), 1e-15);
    const CommutationOp back(4, 3);
    const CVec v = rng.cnormal_vec(12);
    EXPECT_LT((back.apply(t.apply(v)) - v).norm(), 1e-15);
    EXPECT_LT((t.apply_transpose(t.apply(v)) - v).norm(), 1e-15);
    const CommutationOp one(1, 5);
    const CVec w = rng.cnormal_vec(5);
    EXPECT_EQ(one.apply(w), w);
    EXPECT_EQ(CommutationOp(5, 1).apply(w), w);
}

TEST(Commutation, LengthMismatchThrows) {
    EXPECT_THROW(CommutationOp(2, 3).apply(CVec::Zero(5)), std::invalid_argument);
}

TEST(TildeT, MatchesDenseXtilde) {
    Rng rng(2);
    const ArrayDims d{3, 2, 4};
    const CMat x = rng.cnormal_mat(d.n_t, d.l);
    const TildeT tt(d.n_t, d.n_r, d.l);
    EXPECT_LT((tt.apply(vec(x)) - vec(xtilde_dense(x, d.n_r))).norm(), 1e-14);
}

TEST(OptEt, LtIdentity) {
    for (int s = 0; s < 5; ++s) {
        EtInstance in = make_et(10 + s);
        const ArrayDims& d = in.pb.dims;
        const CMat xt = unvec(in.x_t, d.n_t, d.l);
        const EtQuadratic q = et_quadratic(xt, in.pb.c_aa, in.pb.sigma_v_sq, in.pb.model);
        const CVec lt = build_lt(d, in.pb.c_aa, q.m_inv_l);
        Rng rng(100 + s);
        for (int p = 0; p < 20; ++p) {
            const CMat x = rng.cnormal_mat(d.n_t, d.l);
            const CMat lx = xtilde_dense(x, d.n_r) * in.pb.c_aa;
            const cd tr = (q.m_inv_l.adjoint() * lx).trace();
            EXPECT_LT(std::abs(tr - lt.dot(vec(x))), 1e-10);
        }
    }
}

TEST(OptEt, LtVanishesForZeroWaveformOrPrior) {
    EtInstance in = make_et(20);
    const ArrayDims& d = in.pb.dims;
    const EtQuadratic q0 = et_quadratic(CMat::Zero(d.n_t, d.l), in.pb.c_aa, in.pb.sigma_v_sq, in.pb.model);
    EXPECT_LT(build_lt(d, in.pb.c_aa, q0.m_inv_l).norm(), 1e-15);
    const CMat zero_c = CMat::Zero(d.resp_len(), d.resp_len());
    const EtQuadratic q1 = et_quadratic(unvec(in.x_t, d.n_t, d.l), zero_c, in.pb.sigma_v_sq, in.pb.model);
    EXPECT_LT(build_lt(d, zero_c, q1.m_inv_l).norm(), 1e-15);
}

TEST(OptEt, MbarQuadraticFormAndBounds) {
    EtInstance in = make_et(30);
    const ArrayDims& d = in.pb.dims;
    const EtQuadratic q = et_quadratic(unvec(in.x_t, d.n_t, d.l), in.pb.c_aa, in.pb.sigma_v_sq, in.pb.model);
    const CMat mt = build_mtilde(q.m_inv_l, in.pb.model);
    const CMat mb = build_mbar(d, in.pb.c_aa, mt);
    const double lam = lambda_max_bound(mb);
    Rng rng(31);
    for (int p = 0; p < 100; ++p) {
        const CVec x = rng.cnormal_vec(d.tx_len());
        const CMat xm = unvec(x, d.n_t, d.l);
        const double dense = std::real((mt * xtilde_sandwich(xm, in.pb.c_aa, d.n_r)).trace());
        const double form = std::real(x.dot(mb * x));
        EXPECT_NEAR(form, dense, 1e-9 * std::max(1.0, std::abs(dense)));
        EXPECT_GE(form, -1e-9 * x.squaredNorm());
        EXPECT_GE(lam * x.squaredNorm(), form);
    }
}

TEST(OptEt, BlockChannelLambdaIdentity) {
    Rng rng(40);
    const CMat h = rng.cnormal_mat(3, 4);
    const int l = 3;
    CMat big = CMat::Zero(3 * l, 4 * l);
    for (int b = 0; b < l; ++b)
        big.block(3 * b, 4 * b, 3, 4) = h;
    const double dense = (big.adjoint() * big).selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
    const double small = (h.adjoint() * h).selfadjointView<Eigen::Lower>().eigenvalues().maxCoeff();
    EXPECT_NEAR(dense, small, 1e-10 * small);
    const double bound = lambda_max_hth(h);
    EXPECT_GE(bound, small);
    EXPECT_LE(bound, 1.02 * small);
}

TEST(OptEt, MajorizationChain) {
    for (int s = 0; s < 5; ++s) {
        EtInstance in = make_et(50 + s);
        const double lam_h = lambda_max_hth(in.pb.h);
        const EtSurrogate sur = make_et_surrogate(in.pb, in.x_t, in.pen, lam_h);
        const double f0 = et_true_objective(in.pb, in.x_t, in.pen);
        EXPECT_NEAR(et_taylor_value(in.pb, sur, in.x_t, in.pen), f0, 1e-10 * std::max(1.0, std::abs(f0)));
        EXPECT_NEAR(et_majorizer_value(in.pb, sur, in.x_t, in.pen), f0, 1e-10 * std::max(1.0, std::abs(f0)));
        Rng rng(60 + s);
        for (int p = 0; p < 50; ++p) {
            const CVec x = tu::random_in_ball(rng, in.pb.dims.tx_len(), 1.0);
            const double f = et_true_objective(in.pb, x, in.pen);
            const double t = et_taylor_value(in.pb, sur, x, in.pen);
            const double m = et_majorizer_value(in.pb, sur, x, in.pen);
            EXPECT_GE(t, f - 1e-8 * std::max(1.0, std::abs(f)));
            EXPECT_GE(m, t - 1e-8 * std::max(1.0, std::abs(t)));
        }
    }
}

TEST(OptEt, UpdateDecreasesSurrogateAndStaysInBall) {
    for (int s = 0; s < 10; ++s) {
        EtInstance in = make_et(70 + s);
        const double lam_h = lambda_max_hth(in.pb.h);
        const EtSurrogate sur = make_et_surrogate(in.pb, in.x_t, in.pen, lam_h);
        const CVec x1 = mm_update_et(in.pb, sur);
        EXPECT_LE(x1.squaredNorm(), in.pb.power * (1 + 1e-12));
        EXPECT_LE(et_majorizer_value(in.pb, sur, x1, in.pen),
                  et_majorizer_value(in.pb, sur, in.x_t, in.pen) + 1e-12);
    }
}

TEST(OptEt, InteriorQuotientIsNotProjected) {
    EtInstance in = make_et(80);
    in.pb.power = 1e6;
    const EtSurrogate sur = make_et_surrogate(in.pb, in.x_t, in.pen, lambda_max_hth(in.pb.h));
    const CVec x1 = mm_update_et(in.pb, sur);
    const CVec raw = sur.m_t / (sur.lam_mbar + sur.rho * sur.lam_hth);
    EXPECT_LT((x1 - raw).norm(), 1e-14 * std::max(1.0, raw.norm()));
}

TEST(OptEt, MonotoneOverFiftySteps) {
    for (int s = 0; s < 5; ++s) {
        for (EtModel model : {EtModel::one_bit(), EtModel::unquantized()}) {
            EtInstance in = make_et(90 + s, {2, 3, 3}, 2, model);
            const InnerResult r = solve_x_et(in.pb, in.x_t, in.pen, 1e-15, 50, lambda_max_hth(in.pb.h));
            for (size_t i = 1; i < r.history.size(); ++i)
                EXPECT_LE(r.history[i], r.history[i - 1] + 1e-9 * std::max(1.0, std::abs(r.history[i - 1])));
            for (size_t i = 0; i < r.history.size(); ++i)
                EXPECT_TRUE(std::isfinite(r.history[i]));
        }
    }
}

TEST(OptEt, QuVariantDegeneratesToPatchedModel) {
    EtInstance in = make_et(110);
    const double lam_h = lambda_max_hth(in.pb.h);
    const InnerResult a = solve_x_et_qu(in.pb, in.x_t, in.pen, 1e-12, 10, lam_h);
    EtProblem patched = in.pb;
    patched.model = {0.0, 1.0};
    const InnerResult b = solve_x_et(patched, in.x_t, in.pen, 1e-12, 10, lam_h);
    EXPECT_LT((a.x - b.x).norm(), 1e-14);
}

TEST(OptEt, FixedPointForIdentityPrior) {
    EtProblem pb;
    pb.dims = {2, 2, 2};
    pb.c_aa = CMat::Identity(4, 4);
    pb.sigma_v_sq = 0.1;
    pb.power = 1.0;
    pb.h = CMat(0, 2);
    // Run to convergence, then restart from the result.
    Rng rng(120);
    const CVec x0 = tu::random_in_ball(rng, 4, 1.0);
    const InnerResult r = solve_x_et(pb, x0, Penalty{}, 1e-14, 5000, 0.0);
    const InnerResult again = solve_x_et(pb, r.x, Penalty{}, 1e-6, 10, 0.0);
    EXPECT_LE(again.iterations, 2);
}

TEST(OptEt, DeskScaleImprovesCrb) {
    EtProblem pb;
    pb.dims = {4, 4, 8};
    const EtTarget tg = make_et_target(exponential_correlation(4, 0.5), exponential_correlation(4, 0.5));
    pb.c_aa = tg.c_aa;
    pb.sigma_v_sq = 1e-3;
    pb.power = 1.0;
    pb.h = CMat(0, 4);
    Rng rng(130);
    CVec x0 = rng.cnormal_vec(32);
    x0 /= x0.norm();
    const InnerResult r = solve_x_et(pb, x0, Penalty{}, 1e-8, 500, 0.0);
    for (size_t i = 0; i < r.history.size(); ++i)
        ASSERT_TRUE(std::isfinite(r.history[i]));
    EXPECT_LE(r.x.squaredNorm(), 1.0 + 1e-12);
    const double c0 = crb_et(unvec(x0, 4, 8), pb.c_aa, pb.sigma_v_sq);
    const double c1 = crb_et(unvec(r.x, 4, 8), pb.c_aa, pb.sigma_v_sq);
    EXPECT_LT(10 * std::log10(c1 / c0), -2.0);
}
