#pragma once

#include "isac/array_geometry.hpp"
#include "isac/core.hpp"
#include "isac/quantization.hpp"

#include <limits>

namespace isac {

inline constexpr double kInfiniteCrb = std::numeric_limits<double>::infinity();
/// Fisher traces below this report an infinite bound.
inline constexpr double kFisherFloor = 1e-18;

enum class Resolution { OneBit, Infinite };

/// Diagonal-plus-rank-one description of the PT observation covariance and
/// its theta-derivative at one waveform:
///   C  = diag(dd) + s w w^H
///   C' = diag(e)  + s (v w^H + w v^H)
/// For one-bit data C is the Bussgang covariance F C_rr F + (1-2/pi) I; for
/// infinite resolution it is C_rr itself.
struct PtState {
    Resolution resolution = Resolution::OneBit;
    double s = 1.0;         // sigma_alpha^2
    double sigma_v_sq = 1.0;
    CVec y, dy;             // A x, A' x
    RVec c, dc;             // diag(C_rr) and its theta-derivative
    RVec f, df;             // Bussgang gain and derivative (one-bit only)
    RVec dd, e;
    CVec w, v;

    CMat dense_cov() const;
    CMat dense_dcov() const;
    /// C^{-1} u by Sherman-Morrison.
    CVec solve(const CVec& u) const;
};

PtState pt_state(const BlockKronOp& a, const BlockKronOp& da, const CVec& x,
                 const PtTarget& target, double sigma_v_sq, Resolution res);

/// C^{-1} C' C^{-1} formed densely in O(n^2).
CMat pt_information_kernel(const PtState& st);
/// tr(C^{-1} C' C^{-1} C').
double pt_fisher(const PtState& st);
double pt_fisher(const PtState& st, const CMat& p_kernel);

/// Dense matrices of the one-bit PT chain, used as an independent route.
struct PtCrbWorkspace {
    CMat c_rr, c_zz_hat, d_crr_dtheta, d_czz_dtheta;
    RVec f, d_f_dtheta;
};

PtCrbWorkspace pt_crb_workspace(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                                double sigma_v_sq);

double crb_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target, double sigma_v_sq);
double crb_pt_infinite_resolution(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                                  double sigma_v_sq);
/// Same one-bit bound through dense Cholesky solves.
double crb_pt_dense(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                    double sigma_v_sq);

// ---- extended target ----

/// M(x) = X~ C X~^H + diag_coef * diag(X~ C X~^H) + noise_scale * sigma_v^2 I.
struct EtModel {
    double diag_coef = kPi / 2 - 1.0;
    double noise_scale = kPi / 2;

    static EtModel one_bit() { return {kPi / 2 - 1.0, kPi / 2}; }
    static EtModel unquantized() { return {0.0, 1.0}; }
};

struct EtQuadratic {
    CMat l;       // X~ C_aa
    CMat m;       // M(x)
    CMat m_inv_l; // M^{-1} L
    double trace_gain = 0.0;  // tr(L^H M^{-1} L)
};

EtQuadratic et_quadratic(const CMat& x, const CMat& c_aa, double sigma_v_sq, const EtModel& model);

/// sigma_v^2 F^2 + (1 - 2/pi) I, as a diagonal.
RVec et_effective_noise(const CMat& x, const CMat& c_aa, double sigma_v_sq);

/// tr(C_aa) - tr(L^H M^{-1} L) with the one-bit M.
double crb_et(const CMat& x, const CMat& c_aa, double sigma_v_sq);
/// tr((C_aa^{-1} + X~^H F C_vv^{-1} F X~)^{-1}); requires invertible C_aa.
double crb_et_information_form(const CMat& x, const CMat& c_aa, double sigma_v_sq);

struct FormsAgreement {
    bool agree = false;
    double max_relative_gap = 0.0;
};
FormsAgreement crb_et_forms_equal(const CMat& x, const CMat& c_aa, double sigma_v_sq,
                                  double tol = 1e-9);

double mse_et_quantization_unaware(const CMat& x, const CMat& c_aa, double sigma_v_sq);

}  // namespace isac
