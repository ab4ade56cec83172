#pragma once

#include "isac/core.hpp"
#include "isac/crb_metrics.hpp"
#include "isac/opt_pt.hpp"

#include <cstdint>

namespace isac {

struct EtProblem {
    ArrayDims dims;
    CMat c_aa;
    double sigma_v_sq = 1.0;
    double power = 1.0;
    CMat h;  // K x N_t (K may be 0)
    EtModel model = EtModel::one_bit();
};

/// Largest eigenvalue of a Hermitian PSD matrix, inflated by 1.01; falls back
/// to the trace when power iteration does not converge.
double lambda_max_bound(const CMat& m, std::uint64_t seed = 7);
/// Same for H~^H H~ = I_L kron H^H H, computed on H^H H.
double lambda_max_hth(const CMat& h, std::uint64_t seed = 7);

/// l_t with l_t^H x = tr(L_t^H M_t^{-1} L(x)) for every x, where
/// m_inv_l = M_t^{-1} L_t.
CVec build_lt(const ArrayDims& dims, const CMat& c_aa, const CMat& m_inv_l);

/// M~ = W + diag_coef diag(W) with W = M_t^{-1} L_t L_t^H M_t^{-1}.
CMat build_mtilde(const CMat& m_inv_l, const EtModel& model);

/// M-bar with x^H M-bar x = tr(M~ X~ C_aa X~^H), materialized (size N_t L).
CMat build_mbar(const ArrayDims& dims, const CMat& c_aa, const CMat& mtilde);

struct EtSurrogate {
    CVec x_t;
    CVec l_t;
    CMat m_bar;
    double lam_mbar = 0.0;
    double lam_hth = 0.0;
    double rho = 0.0;
    CVec m_t;
    double trace_w = 0.0;     // tr(W), multiplies noise_scale * sigma_v^2
    double trace_gain = 0.0;  // tr(L_t^H M_t^{-1} L_t)
};

EtSurrogate make_et_surrogate(const EtProblem& pb, const CVec& x_t, const Penalty& pen,
                              double lam_hth);

/// -tr(L^H M^{-1} L) + penalty.
double et_true_objective(const EtProblem& pb, const CVec& x, const Penalty& pen);
/// First-order bound -2 Re(l_t^H x) + x^H M-bar x + const + penalty; equals the true objective at x_t.
double et_taylor_value(const EtProblem& pb, const EtSurrogate& sur, const CVec& x,
                       const Penalty& pen);
/// Isotropic bound (lam_M + rho lam_H) ||x||^2 - 2 Re(m_t^H x) + const; equals the Taylor bound at x_t.
double et_majorizer_value(const EtProblem& pb, const EtSurrogate& sur, const CVec& x,
                          const Penalty& pen);

CVec mm_update_et(const EtProblem& pb, const EtSurrogate& sur);

InnerResult solve_x_et(const EtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                       int max_iter, double lam_hth);
/// Quantization-unaware variant: the same machinery with M = X~ C X~^H + sigma_v^2 I.
InnerResult solve_x_et_qu(const EtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                          int max_iter, double lam_hth);

}  // namespace isac
