#include "isac/opt_pt.hpp"

#include "isac/linalg.hpp"
#include "isac/structured.hpp"

namespace isac {

namespace {

int block_len(const CMat& h, const CVec& x) { return static_cast<int>(x.size() / h.cols()); }

PtState state_at(const PtProblem& pb, const CVec& x) {
    const BlockKronOp a = pt_response_operator(pb.dims, pb.target.theta);
    const BlockKronOp da = pt_response_derivative_operator(pb.dims, pb.target.theta);
    return pt_state(a, da, x, pb.target, pb.sigma_v_sq, pb.resolution);
}

CVec cw(const RVec& a, const CVec& b) { return a.cast<cd>().cwiseProduct(b); }

// C u with C = diag(dd) + s w w^H.
CVec apply_cov(const PtState& st, const CVec& u) {
    return cw(st.dd, u) + st.s * st.w * st.w.dot(u);
}

// Pieces of tr(P C P C) = sum |P_ij|^2 dd_i dd_j + 2 s sum dd_i |(Pw)_i|^2 + s^2 (w^H P w)^2.
double quad_term(const PtState& st, const CMat& p) {
    const RVec pw2 = (p * st.w).cwiseAbs2();
    const RMat p2 = p.cwiseAbs2();
    const double wpw = std::real(st.w.dot(p * st.w));
    return st.dd.dot(p2 * st.dd) + 2.0 * st.s * st.dd.dot(pw2) + st.s * st.s * wpw * wpw;
}

double lin_term(const PtState& st, const CMat& p) {
    double t = 0.0;
    for (Eigen::Index i = 0; i < p.rows(); ++i)
        t += p(i, i).real() * st.e(i);
    return t + 2.0 * st.s * std::real(st.w.dot(p * st.v));
}

}  // namespace

double penalty_value(const CMat& h, const CVec& x, const Penalty& pen) {
    if (h.rows() == 0 || pen.rho == 0.0)
        return 0.0;
    return pen.rho * (htilde_apply(h, x) - pen.target).squaredNorm();
}

CVec penalty_gradient(const CMat& h, const CVec& x, const Penalty& pen) {
    if (h.rows() == 0 || pen.rho == 0.0)
        return CVec::Zero(x.size());
    return pen.rho * htilde_adjoint(h, htilde_apply(h, x) - pen.target, block_len(h, x));
}

SurrogateAnchor make_anchor(const PtProblem& pb, const CVec& x_t) {
    SurrogateAnchor an;
    an.x = x_t;
    an.state = state_at(pb, x_t);
    an.p = pt_information_kernel(an.state);
    an.fisher = pt_fisher(an.state, an.p);
    return an;
}

CMat apply_q_inverse(const SurrogateAnchor& an, const CMat& v) {
    CMat z(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < v.cols(); ++j)
        z.col(j) = an.state.solve(v.col(j));
    const CMat zh = z.adjoint();
    CMat out(v.rows(), v.cols());
    for (Eigen::Index j = 0; j < zh.cols(); ++j)
        out.col(j) = an.state.solve(zh.col(j));
    return out.adjoint();
}

double pt_true_objective(const PtProblem& pb, const CVec& x, const Penalty& pen) {
    return -pt_fisher(state_at(pb, x)) + penalty_value(pb.h, x, pen);
}

double surrogate_value(const PtProblem& pb, const SurrogateAnchor& an, const CVec& x,
                       const Penalty& pen) {
    require(x.size() == pb.dims.tx_len(), "surrogate_value: dimension mismatch");
    const PtState st = state_at(pb, x);
    return -2.0 * lin_term(st, an.p) + quad_term(st, an.p) + penalty_value(pb.h, x, pen);
}

SurrogateGradient surrogate_gradient(const PtProblem& pb, const SurrogateAnchor& an, const CVec& x,
                                     const Penalty& pen) {
    require(x.size() == pb.dims.tx_len(), "surrogate_gradient: dimension mismatch");
    const BlockKronOp a = pt_response_operator(pb.dims, pb.target.theta);
    const BlockKronOp da = pt_response_derivative_operator(pb.dims, pb.target.theta);
    const PtState st = pt_state(a, da, x, pb.target, pb.sigma_v_sq, pb.resolution);
    const CMat& p = an.p;
    const double s = st.s, sv = pb.sigma_v_sq, k = kBussgang;
    const Eigen::Index n = st.y.size();
    const CVec& y = st.y;
    const CVec& dy = st.dy;

    // Conjugate gradient of a term reached through y and dy: (A^H g_y + A'^H g_dy) / 2
    // with g the real-plus-imaginary partials.
    auto back = [&](const CVec& g_y, const CVec& g_dy) {
        CVec out = a.adjoint(g_y);
        if (g_dy.size() > 0)
            out += da.adjoint(g_dy);
        return CVec(0.5 * out);
    };
    const CVec none;
    // Partial with respect to c (real) maps to g_y = 2 s y dT/dc.
    auto via_c = [&](const RVec& dt_dc) { return back(2.0 * s * cw(dt_dc, y), none); };
    auto via_dc = [&](const RVec& dt_ddc) {
        return back(2.0 * s * cw(dt_ddc, dy), 2.0 * s * cw(dt_ddc, y));
    };

    // R = P C P applied to a vector, and its diagonal.
    auto apply_r = [&](const CVec& u) { return CVec(p * apply_cov(st, p * u)); };
    const CVec pw = p * st.w;
    RVec r_diag(n);
    {
        const RMat p2 = p.cwiseAbs2();
        const RVec t = p2 * st.dd;
        for (Eigen::Index i = 0; i < n; ++i)
            r_diag(i) = t(i) + s * std::norm(pw(i));
    }

    SurrogateGradient g;
    const CVec zero = CVec::Zero(x.size());
    g.m4 = penalty_gradient(pb.h, x, pen);

    if (pb.resolution == Resolution::Infinite) {
        g.m11 = g.m13 = g.m14 = g.m15 = g.m16 = zero;
        g.m12 = back(-4.0 * s * (p * dy), -4.0 * s * (p * y));
        g.m3 = back(4.0 * s * apply_r(y), none);
        return g;
    }

    const RVec& f = st.f;
    const RVec& df = st.df;
    const RVec& c = st.c;
    const RVec& dc = st.dc;
    const CVec fy = cw(f, y), dfy = cw(df, y), fdy = cw(f, dy);
    const CVec p_fy = p * fy, p_dfy = p * dfy, p_fdy = p * fdy;
    const RVec c_m32 = c.array().pow(-1.5).matrix();
    const RVec c_m52 = c.array().pow(-2.5).matrix();

    g.m11 = back(2.0 * s * (-2.0) * (cw(f, p_dfy) + cw(df, p_fy)), none);
    g.m12 = back(-4.0 * s * cw(f, p_fdy), -4.0 * s * cw(f, p_fy));

    RVec s_i(n), t_i(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const cd pfc_prime = s * std::conj(y(i)) * p_dfy(i) + sv * p(i, i) * df(i);
        const cd pfcp = s * (std::conj(y(i)) * p_fdy(i) + std::conj(dy(i)) * p_fy(i));
        s_i(i) = 2.0 * std::real(pfc_prime + pfcp);
        t_i(i) = 2.0 * std::real(s * std::conj(y(i)) * p_fy(i) + sv * p(i, i) * f(i));
    }
    g.m13 = via_c(k * s_i.cwiseProduct(c_m32));
    g.m14 = via_c(-k * t_i.cwiseProduct(dc).cwiseProduct(c_m52));
    g.m15 = via_dc(k * t_i.cwiseProduct(c_m32));
    g.m16 = via_c(-0.5 * k * t_i.cwiseProduct(dc).cwiseProduct(c_m52));

    const CVec r_fy = apply_r(fy);
    RVec u_i(n);
    for (Eigen::Index i = 0; i < n; ++i)
        u_i(i) = 4.0 * std::real(s * std::conj(y(i)) * r_fy(i) + sv * r_diag(i) * f(i));
    g.m3 = back(4.0 * s * cw(f, r_fy), none) + via_c(-0.5 * k * u_i.cwiseProduct(c_m32));
    return g;
}

namespace {

struct DenseParts {
    CMat c, dc_mat;  // C_rr and its theta-derivative
    RVec cdiag, dcdiag;
};

DenseParts dense_parts(const PtProblem& pb, const CVec& x) {
    const PtState st = state_at(pb, x);
    DenseParts d;
    const Eigen::Index n = st.y.size();
    d.c = st.s * st.y * st.y.adjoint() + pb.sigma_v_sq * CMat::Identity(n, n);
    d.dc_mat = st.s * (st.dy * st.y.adjoint() + st.y * st.dy.adjoint());
    d.cdiag = st.c;
    d.dcdiag = st.dc;
    return d;
}

CMat diag_of(const RVec& v) { return v.cast<cd>().asDiagonal(); }

RVec gain_of(const RVec& c) { return kBussgang * c.cwiseSqrt().cwiseInverse(); }

// -1/2 kappa dc c^{-1} c^{-1/2} with each factor from its own point.
RVec dgain_of(const RVec& dc, const RVec& c_inv_src, const RVec& c_sqrt_src) {
    return (-0.5 * kBussgang) *
           dc.cwiseProduct(c_inv_src.cwiseInverse()).cwiseProduct(c_sqrt_src.cwiseSqrt().cwiseInverse());
}

double rtrace(const CMat& m) { return std::real(m.trace()); }

}  // namespace

double surrogate_subterm_value(const PtProblem& pb, const SurrogateAnchor& an, PtSubTerm term,
                               const CVec& x0, const CVec& x, const Penalty& pen) {
    const CMat& p = an.p;
    if (term == PtSubTerm::M4)
        return penalty_value(pb.h, x, pen);
    const DenseParts o = dense_parts(pb, x0);
    const DenseParts v = dense_parts(pb, x);
    if (pb.resolution == Resolution::Infinite) {
        switch (term) {
            case PtSubTerm::M12:
                return -2.0 * rtrace(p * v.dc_mat);
            case PtSubTerm::M3: {
                const CMat pc = p * v.c;
                return rtrace(pc * pc);
            }
            default:
                return 0.0;
        }
    }
    const CMat f0 = diag_of(gain_of(o.cdiag));
    const CMat fx = diag_of(gain_of(v.cdiag));
    const CMat df0 = diag_of(dgain_of(o.dcdiag, o.cdiag, o.cdiag));
    auto lin = [&](const CMat& dfm, const CMat& c, const CMat& fm) {
        return -2.0 * rtrace(p * (dfm * c * fm + fm * c * dfm));
    };
    switch (term) {
        case PtSubTerm::M11:
            return -2.0 * rtrace(p * (df0 * v.c * f0 + f0 * v.c * df0));
        case PtSubTerm::M12:
            return -2.0 * rtrace(p * f0 * v.dc_mat * f0);
        case PtSubTerm::M13:
            return -2.0 * rtrace(p * (df0 * o.c * fx + fx * o.dc_mat * fx + fx * o.c * df0));
        case PtSubTerm::M14:
            return lin(diag_of(dgain_of(o.dcdiag, v.cdiag, o.cdiag)), o.c, f0);
        case PtSubTerm::M15:
            return lin(diag_of(dgain_of(v.dcdiag, o.cdiag, o.cdiag)), o.c, f0);
        case PtSubTerm::M16:
            return lin(diag_of(dgain_of(o.dcdiag, o.cdiag, v.cdiag)), o.c, f0);
        case PtSubTerm::M3: {
            CMat chat = fx * v.c * fx;
            chat.diagonal().array() += kQuantNoise;
            const CMat pc = p * chat;
            return rtrace(pc * pc);
        }
        default:
            return 0.0;
    }
}

PgdStep pgd_step(const PtProblem& pb, const SurrogateAnchor& an, const Penalty& pen,
                 const LineSearchConfig& cfg) {
    const CVec& xt = an.x;
    const CVec g = surrogate_gradient(pb, an, xt, pen).total();
    const double gn = g.norm();
    PgdStep out{xt, false, 0.0};
    if (!(gn > 0.0) || !std::isfinite(gn))
        return out;
    const double m0 = surrogate_value(pb, an, xt, pen);
    const CVec dir = g / gn;
    for (double mu = cfg.mu0_scale * std::sqrt(pb.power); mu >= cfg.mu_min; mu *= cfg.shrink) {
        const CVec xn = project_power_ball(xt - mu * dir, pb.power);
        const double m1 = surrogate_value(pb, an, xn, pen);
        const double rhs = 2.0 * mu / gn * std::real(g.dot(xn - xt));
        if (m1 - m0 <= rhs) {
            out.x = xn;
            out.mu = mu;
            return out;
        }
    }
    out.stalled = true;
    return out;
}

InnerResult solve_x_pt(const PtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                       int max_iter, const LineSearchConfig& cfg) {
    require(x_init.size() == pb.dims.tx_len(), "solve_x_pt: dimension mismatch");
    require(x_init.squaredNorm() <= pb.power * (1.0 + 1e-9), "solve_x_pt: x_init outside power ball");
    InnerResult res;
    res.x = x_init;
    SurrogateAnchor an = make_anchor(pb, x_init);
    double f = -an.fisher + penalty_value(pb.h, x_init, pen);
    res.history.push_back(f);
    for (int it = 0; it < max_iter; ++it) {
        const PgdStep step = pgd_step(pb, an, pen, cfg);
        if (step.stalled) {
            res.stalled = true;
            break;
        }
        res.iterations = it + 1;
        res.x = step.x;
        an = make_anchor(pb, res.x);
        const double fn = -an.fisher + penalty_value(pb.h, res.x, pen);
        res.history.push_back(fn);
        const double change = std::abs(fn - f);
        f = fn;
        if (step.mu == 0.0 || change <= tol * std::max(std::abs(fn), 1e-300))
            break;
    }
    res.objective = f;
    return res;
}

}  // namespace isac
