#pragma once

#include "isac/array_geometry.hpp"
#include "isac/core.hpp"

namespace isac {

enum class TargetModel { PT, ET };

struct EchoCovariance {
    CMat c_rr;
    TargetModel model_tag = TargetModel::ET;
};

/// sigma_alpha^2 y y^H + sigma_v^2 I with y = A_theta x, kept in rank-one form.
struct PtEchoCovariance {
    CVec y;
    double sigma_alpha_sq = 1.0;
    double sigma_v_sq = 1.0;

    RVec diagonal() const;
    double trace() const;
    EchoCovariance dense() const;
};

struct BussgangPair {
    RVec f;        // diagonal of F
    CMat c_zz_hat;
};

/// (sign(Re r) + j sign(Im r)) / sqrt(2), with sign(0) = +1.
CVec quantize_one_bit(const CVec& r);

/// sqrt(2/pi) diag(c_rr)^{-1/2}, returned as the diagonal.
RVec bussgang_gain(const CMat& c_rr);
RVec bussgang_gain_diag(const RVec& diag_c_rr);

/// (2/pi) arcsin of the normalized correlation, applied to real and
/// imaginary parts separately.
CMat covariance_czz_exact(const CMat& c_rr);
/// F C_rr F + (1 - 2/pi) I.
CMat covariance_czz_approx(const CMat& c_rr);
BussgangPair bussgang_pair(const CMat& c_rr);

PtEchoCovariance crr_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                        double sigma_v_sq);
EchoCovariance crr_et(const CMat& x, const CMat& c_aa, double sigma_v_sq);

}  // namespace isac
