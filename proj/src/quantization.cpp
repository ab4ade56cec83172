#include "isac/quantization.hpp"

#include "isac/structured.hpp"

namespace isac {

RVec PtEchoCovariance::diagonal() const {
    return (sigma_alpha_sq * y.cwiseAbs2()).array() + sigma_v_sq;
}

double PtEchoCovariance::trace() const {
    return sigma_alpha_sq * y.squaredNorm() + sigma_v_sq * static_cast<double>(y.size());
}

EchoCovariance PtEchoCovariance::dense() const {
    CMat c = sigma_alpha_sq * y * y.adjoint();
    c.diagonal().array() += sigma_v_sq;
    return {c, TargetModel::PT};
}

CVec quantize_one_bit(const CVec& r) {
    const double s = 1.0 / std::sqrt(2.0);
    CVec z(r.size());
    for (Eigen::Index i = 0; i < r.size(); ++i)
        z(i) = cd(r(i).real() >= 0.0 ? s : -s, r(i).imag() >= 0.0 ? s : -s);
    return z;
}

RVec bussgang_gain_diag(const RVec& d) {
    RVec f(d.size());
    for (Eigen::Index i = 0; i < d.size(); ++i) {
        if (!(d(i) > 0.0))
            throw std::invalid_argument("bussgang_gain: non-positive diagonal entry");
        f(i) = kBussgang / std::sqrt(d(i));
    }
    return f;
}

RVec bussgang_gain(const CMat& c_rr) {
    require(c_rr.rows() == c_rr.cols(), "bussgang_gain: matrix must be square");
    return bussgang_gain_diag(c_rr.diagonal().real());
}

namespace {

double clamped_asin(double v) {
    if (std::abs(v) > 1.0 + 1e-9)
        throw std::domain_error("covariance_czz_exact: normalized correlation exceeds 1");
    return std::asin(std::clamp(v, -1.0, 1.0));
}

}  // namespace

CMat covariance_czz_exact(const CMat& c_rr) {
    require(c_rr.rows() == c_rr.cols(), "covariance_czz_exact: matrix must be square");
    const Eigen::Index n = c_rr.rows();
    RVec d = c_rr.diagonal().real();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(d(i) > 0.0))
            throw std::invalid_argument("covariance_czz_exact: non-positive diagonal entry");
    RVec s = d.cwiseSqrt().cwiseInverse();
    CMat out(n, n);
    const double g = 2.0 / kPi;
    for (Eigen::Index j = 0; j < n; ++j) {
        out(j, j) = 1.0;
        for (Eigen::Index i = j + 1; i < n; ++i) {
            const cd rho = c_rr(i, j) * (s(i) * s(j));
            const cd v = g * cd(clamped_asin(rho.real()), clamped_asin(rho.imag()));
            out(i, j) = v;
            out(j, i) = std::conj(v);
        }
    }
    return out;
}

CMat covariance_czz_approx(const CMat& c_rr) {
    const RVec f = bussgang_gain(c_rr);
    CMat out = f.cast<cd>().asDiagonal() * c_rr * f.cast<cd>().asDiagonal();
    out = 0.5 * (out + out.adjoint());
    out.diagonal().setOnes();
    return out;
}

BussgangPair bussgang_pair(const CMat& c_rr) {
    return {bussgang_gain(c_rr), covariance_czz_approx(c_rr)};
}

PtEchoCovariance crr_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                        double sigma_v_sq) {
    if (!(sigma_v_sq > 0.0))
        throw std::invalid_argument("crr_pt: sigma_v^2 must be positive");
    const BlockKronOp a = pt_response_operator(dims, target.theta);
    return {a.apply(x), target.sigma_alpha_sq, sigma_v_sq};
}

EchoCovariance crr_et(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    if (!(sigma_v_sq > 0.0))
        throw std::invalid_argument("crr_et: sigma_v^2 must be positive");
    const Eigen::Index n_t = x.rows();
    if (n_t == 0 || c_aa.rows() != c_aa.cols() || c_aa.rows() % n_t != 0)
        throw std::invalid_argument("crr_et: dimension mismatch");
    const int n_r = static_cast<int>(c_aa.rows() / n_t);
    CMat c = xtilde_sandwich(x, c_aa, n_r);
    c.diagonal().array() += sigma_v_sq;
    return {c, TargetModel::ET};
}

}  // namespace isac
