#include "isac/array_geometry.hpp"

#include "isac/linalg.hpp"

namespace isac {

namespace {

void check_angle(double theta) {
    // Small slack so that +-pi/2 computed in floating point is accepted.
    if (!(std::abs(theta) <= kPi / 2 + 1e-12))
        throw std::invalid_argument("steering: angle outside [-pi/2, pi/2]");
}

}  // namespace

CVec steering(int n, double theta) {
    require(n >= 1, "steering: n must be >= 1");
    check_angle(theta);
    const double s = std::sin(theta);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    CVec a(n);
    for (int m = 0; m < n; ++m)
        a(m) = norm * std::polar(1.0, -kPi * m * s);
    return a;
}

CVec steering_derivative(int n, double theta) {
    CVec a = steering(n, theta);
    const double c = std::cos(theta);
    for (int m = 0; m < n; ++m)
        a(m) *= cd(0.0, -kPi * m * c);
    return a;
}

BlockKronOp pt_response_operator(const ArrayDims& dims, double theta) {
    dims.validate();
    const CVec ar = steering(dims.n_r, theta);
    const CVec at = steering(dims.n_t, theta);
    return BlockKronOp(ar * at.transpose(), dims.l);
}

BlockKronOp pt_response_derivative_operator(const ArrayDims& dims, double theta) {
    dims.validate();
    const CVec ar = steering(dims.n_r, theta);
    const CVec at = steering(dims.n_t, theta);
    const CVec dar = steering_derivative(dims.n_r, theta);
    const CVec dat = steering_derivative(dims.n_t, theta);
    return BlockKronOp(dar * at.transpose() + ar * dat.transpose(), dims.l);
}

CMat exponential_correlation(int n, double c) {
    require(n >= 1, "exponential_correlation: n must be >= 1");
    require(std::abs(c) < 1.0, "exponential_correlation: |c| must be < 1");
    CMat phi(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            phi(i, j) = std::pow(c, std::abs(i - j));
    return phi;
}

CMat et_prior_covariance(const CMat& phi_r, const CMat& phi_t) {
    require_hermitian_psd(phi_r, "et_prior_covariance(phi_r)");
    require_hermitian_psd(phi_t, "et_prior_covariance(phi_t)");
    CMat c = kron(phi_t.transpose(), phi_r, 1L << 26);
    return 0.5 * (c + c.adjoint());
}

EtTarget make_et_target(const CMat& phi_r, const CMat& phi_t) {
    return {phi_r, phi_t, et_prior_covariance(phi_r, phi_t)};
}

CMat et_sample_sqrt(const CMat& phi_r_half, const CMat& phi_t_half, Rng& rng) {
    const CMat a = rng.cnormal_mat(static_cast<int>(phi_r_half.rows()),
                                   static_cast<int>(phi_t_half.rows()));
    return phi_r_half * a * phi_t_half;
}

CMat et_sample(const CMat& phi_r, const CMat& phi_t, Rng& rng) {
    return et_sample_sqrt(sqrt_psd(phi_r), sqrt_psd(phi_t), rng);
}

}  // namespace isac
