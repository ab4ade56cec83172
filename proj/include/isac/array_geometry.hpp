#pragma once

#include "isac/core.hpp"
#include "isac/rng.hpp"
#include "isac/structured.hpp"

namespace isac {

struct PtTarget {
    double theta = 0.0;
    double sigma_alpha_sq = 1.0;
};

struct EtTarget {
    CMat phi_r;
    CMat phi_t;
    CMat c_aa;
};

/// Half-wavelength ULA response, entry m = exp(-j pi m sin(theta)) / sqrt(n).
CVec steering(int n, double theta);
/// d/dtheta of steering(n, theta).
CVec steering_derivative(int n, double theta);

/// I_L kron (a_r a_t^T).
BlockKronOp pt_response_operator(const ArrayDims& dims, double theta);
/// I_L kron (a_r' a_t^T + a_r a_t'^T).
BlockKronOp pt_response_derivative_operator(const ArrayDims& dims, double theta);

/// Exponential correlation model [Phi]_{mn} = c^{|m-n|}.
CMat exponential_correlation(int n, double c);

/// transpose(phi_t) kron phi_r.
CMat et_prior_covariance(const CMat& phi_r, const CMat& phi_t);
EtTarget make_et_target(const CMat& phi_r, const CMat& phi_t);

/// Phi_R^{1/2} A_iid Phi_T^{1/2}.
CMat et_sample(const CMat& phi_r, const CMat& phi_t, Rng& rng);
/// Same, with precomputed square roots.
CMat et_sample_sqrt(const CMat& phi_r_half, const CMat& phi_t_half, Rng& rng);

}  // namespace isac
