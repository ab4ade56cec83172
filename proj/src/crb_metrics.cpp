#include "isac/crb_metrics.hpp"

#include "isac/linalg.hpp"
#include "isac/structured.hpp"

namespace isac {

namespace {

CMat diag_c(const RVec& d) { return d.cast<cd>().asDiagonal(); }

double crb_from_fisher(double j) { return j < kFisherFloor ? kInfiniteCrb : 1.0 / j; }

}  // namespace

PtState pt_state(const BlockKronOp& a, const BlockKronOp& da, const CVec& x,
                 const PtTarget& target, double sigma_v_sq, Resolution res) {
    if (!(sigma_v_sq > 0.0))
        throw std::invalid_argument("pt_state: sigma_v^2 must be positive");
    PtState st;
    st.resolution = res;
    st.s = target.sigma_alpha_sq;
    st.sigma_v_sq = sigma_v_sq;
    st.y = a.apply(x);
    st.dy = da.apply(x);
    const Eigen::Index n = st.y.size();
    st.c = (st.s * st.y.cwiseAbs2()).array() + sigma_v_sq;
    st.dc.resize(n);
    for (Eigen::Index i = 0; i < n; ++i)
        st.dc(i) = 2.0 * st.s * std::real(std::conj(st.y(i)) * st.dy(i));
    if (res == Resolution::OneBit) {
        st.f = kBussgang * st.c.cwiseSqrt().cwiseInverse();
        st.df = (-0.5 * kBussgang) * st.dc.cwiseProduct(st.c.array().pow(-1.5).matrix());
        st.w = st.f.cast<cd>().cwiseProduct(st.y);
        st.v = st.df.cast<cd>().cwiseProduct(st.y) + st.f.cast<cd>().cwiseProduct(st.dy);
        st.dd = (sigma_v_sq * st.f.cwiseAbs2()).array() + (1.0 - kBussgang * kBussgang);
        st.e = 2.0 * sigma_v_sq * st.f.cwiseProduct(st.df);
    } else {
        st.w = st.y;
        st.v = st.dy;
        st.dd = RVec::Constant(n, sigma_v_sq);
        st.e = RVec::Zero(n);
    }
    return st;
}

CMat PtState::dense_cov() const {
    CMat m = s * w * w.adjoint();
    m.diagonal() += dd.cast<cd>();
    return m;
}

CMat PtState::dense_dcov() const {
    CMat m = s * (v * w.adjoint() + w * v.adjoint());
    m.diagonal() += e.cast<cd>();
    return m;
}

CVec PtState::solve(const CVec& u) const {
    const CVec q = w.cwiseQuotient(dd.cast<cd>());
    const double beta = s / (1.0 + s * std::real(w.dot(q)));
    return u.cwiseQuotient(dd.cast<cd>()) - beta * q * q.dot(u);
}

CMat pt_information_kernel(const PtState& st) {
    const CVec ci_v = st.solve(st.v);
    const CVec ci_w = st.solve(st.w);
    CMat p = st.s * (ci_v * ci_w.adjoint() + ci_w * ci_v.adjoint());
    if (st.e.cwiseAbs().maxCoeff() > 0.0) {
        const CVec q = st.w.cwiseQuotient(st.dd.cast<cd>());
        const double beta = st.s / (1.0 + st.s * std::real(st.w.dot(q)));
        const RVec ed = st.e.cwiseQuotient(st.dd);
        const CVec g = ed.cast<cd>().cwiseProduct(q);
        const double qeq = std::real(q.dot(st.e.cast<cd>().cwiseProduct(q)));
        p.diagonal() += ed.cwiseQuotient(st.dd).cast<cd>();
        p -= beta * (g * q.adjoint() + q * g.adjoint());
        p += (beta * beta * qeq) * (q * q.adjoint());
    }
    return 0.5 * (p + p.adjoint());
}

double pt_fisher(const PtState& st, const CMat& p) {
    double j = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        j += p(i, i).real() * st.e(i);
    j += 2.0 * st.s * std::real(st.w.dot(p * st.v));
    return j;
}

double pt_fisher(const PtState& st) { return pt_fisher(st, pt_information_kernel(st)); }

PtCrbWorkspace pt_crb_workspace(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                                double sigma_v_sq) {
    const BlockKronOp a = pt_response_operator(dims, target.theta);
    const BlockKronOp da = pt_response_derivative_operator(dims, target.theta);
    const CVec y = a.apply(x);
    const CVec dy = da.apply(x);
    const double s = target.sigma_alpha_sq;
    PtCrbWorkspace ws;
    ws.c_rr = crr_pt(x, dims, target, sigma_v_sq).dense().c_rr;
    ws.d_crr_dtheta = s * (dy * y.adjoint() + y * dy.adjoint());
    ws.f = bussgang_gain(ws.c_rr);
    const RVec c = ws.c_rr.diagonal().real();
    const RVec dc = ws.d_crr_dtheta.diagonal().real();
    ws.d_f_dtheta = (-0.5 * kBussgang) * c.cwiseInverse().cwiseProduct(dc).cwiseProduct(
                                             c.cwiseSqrt().cwiseInverse());
    const CMat f = diag_c(ws.f);
    const CMat df = diag_c(ws.d_f_dtheta);
    ws.c_zz_hat = f * ws.c_rr * f;
    ws.c_zz_hat.diagonal().array() += kQuantNoise;
    ws.d_czz_dtheta = df * ws.c_rr * f + f * ws.d_crr_dtheta * f + f * ws.c_rr * df;
    return ws;
}

double crb_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target, double sigma_v_sq) {
    const BlockKronOp a = pt_response_operator(dims, target.theta);
    const BlockKronOp da = pt_response_derivative_operator(dims, target.theta);
    return crb_from_fisher(pt_fisher(pt_state(a, da, x, target, sigma_v_sq, Resolution::OneBit)));
}

double crb_pt_infinite_resolution(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                                  double sigma_v_sq) {
    const BlockKronOp a = pt_response_operator(dims, target.theta);
    const BlockKronOp da = pt_response_derivative_operator(dims, target.theta);
    return crb_from_fisher(pt_fisher(pt_state(a, da, x, target, sigma_v_sq, Resolution::Infinite)));
}

double crb_pt_dense(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                    double sigma_v_sq) {
    const PtCrbWorkspace ws = pt_crb_workspace(x, dims, target, sigma_v_sq);
    const HermitianSolver solver(ws.c_zz_hat);
    const CMat z = solver.solve(ws.d_czz_dtheta);
    return crb_from_fisher(std::real((z * z).trace()));
}

// ---- extended target ----

EtQuadratic et_quadratic(const CMat& x, const CMat& c_aa, double sigma_v_sq, const EtModel& model) {
    if (!(sigma_v_sq > 0.0))
        throw std::invalid_argument("et_quadratic: sigma_v^2 must be positive");
    const Eigen::Index n_t = x.rows();
    if (n_t == 0 || c_aa.rows() != c_aa.cols() || c_aa.rows() % n_t != 0)
        throw std::invalid_argument("et_quadratic: dimension mismatch");
    const int n_r = static_cast<int>(c_aa.rows() / n_t);
    EtQuadratic q;
    q.l = xtilde_left(x, c_aa, n_r);
    CMat core = xtilde_left(x, q.l.adjoint(), n_r);
    core = 0.5 * (core + core.adjoint());
    q.m = core;
    q.m.diagonal() += (model.diag_coef * core.diagonal().real()).cast<cd>();
    q.m.diagonal().array() += model.noise_scale * sigma_v_sq;
    const HermitianSolver solver(q.m);
    q.m_inv_l = solver.solve(q.l);
    q.trace_gain = std::real((q.l.adjoint() * q.m_inv_l).trace());
    return q;
}

RVec et_effective_noise(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    const RVec f = bussgang_gain(crr_et(x, c_aa, sigma_v_sq).c_rr);
    return (sigma_v_sq * f.cwiseAbs2()).array() + kQuantNoise;
}

double crb_et(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    const EtQuadratic q = et_quadratic(x, c_aa, sigma_v_sq, EtModel::one_bit());
    return std::real(c_aa.trace()) - q.trace_gain;
}

double crb_et_information_form(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    const Eigen::Index n_t = x.rows();
    const int n_r = static_cast<int>(c_aa.rows() / n_t);
    const RVec f = bussgang_gain(crr_et(x, c_aa, sigma_v_sq).c_rr);
    const RVec cvv = (sigma_v_sq * f.cwiseAbs2()).array() + kQuantNoise;
    const RVec dgain = f.cwiseAbs2().cwiseQuotient(cvv);  // F C_vv^{-1} F
    const CMat xt = xtilde_left(x, CMat::Identity(c_aa.rows(), c_aa.rows()), n_r);
    const CMat xt_g = dgain.cast<cd>().asDiagonal() * xt;
    CMat info = HermitianSolver(c_aa).inverse() + xt.adjoint() * xt_g;
    info = 0.5 * (info + info.adjoint());
    return std::real(HermitianSolver(info).inverse().trace());
}

FormsAgreement crb_et_forms_equal(const CMat& x, const CMat& c_aa, double sigma_v_sq, double tol) {
    const double a = crb_et(x, c_aa, sigma_v_sq);
    const double b = crb_et_information_form(x, c_aa, sigma_v_sq);
    FormsAgreement out;
    out.max_relative_gap = std::abs(a - b) / std::max(std::abs(b), 1e-300);
    out.agree = out.max_relative_gap <= tol;
    return out;
}

double mse_et_quantization_unaware(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    const EtQuadratic q = et_quadratic(x, c_aa, sigma_v_sq, EtModel::unquantized());
    return std::real(c_aa.trace()) - q.trace_gain;
}

}  // namespace isac
