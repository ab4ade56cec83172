#include "isac/opt_et.hpp"

#include "isac/linalg.hpp"
#include "isac/structured.hpp"

namespace isac {

double lambda_max_bound(const CMat& m, std::uint64_t seed) {
    const int n = static_cast<int>(m.rows());
    if (n == 0)
        return 0.0;
    const double tr = std::max(0.0, std::real(m.trace()));
    if (tr == 0.0)
        return 0.0;
    const PowerIterationResult r =
        power_iteration([&](const CVec& v) { return CVec(m * v); }, n, seed, 1e-8, 10000);
    if (!r.converged)
        return tr;
    return std::min(1.01 * r.value, tr);
}

double lambda_max_hth(const CMat& h, std::uint64_t seed) {
    if (h.rows() == 0)
        return 0.0;
    return lambda_max_bound(h.adjoint() * h, seed);
}

CVec build_lt(const ArrayDims& dims, const CMat& c_aa, const CMat& m_inv_l) {
    const TildeT tt(dims.n_t, dims.n_r, dims.l);
    // G^H with G = C_aa L_t^H M_t^{-1}.
    const CMat gh = m_inv_l * c_aa;
    return tt.apply_transpose(vec(gh));
}

CMat build_mtilde(const CMat& m_inv_l, const EtModel& model) {
    CMat w = m_inv_l * m_inv_l.adjoint();
    w = 0.5 * (w + w.adjoint());
    w.diagonal() += (model.diag_coef * w.diagonal().real()).cast<cd>();
    return w;
}

CMat build_mbar(const ArrayDims& dims, const CMat& c_aa, const CMat& mt) {
    const int nt = dims.n_t, nr = dims.n_r, l = dims.l;
    const int n = nt * l;
    CMat mb(n, n);
    for (int t = 0; t < nt; ++t)
        for (int tp = 0; tp < nt; ++tp) {
            const CMat cbt = c_aa.block(tp * nr, t * nr, nr, nr).transpose();
            for (int b = 0; b < l; ++b)
                for (int bp = 0; bp < l; ++bp)
                    mb(t + b * nt, tp + bp * nt) =
                        cbt.cwiseProduct(mt.block(b * nr, bp * nr, nr, nr)).sum();
        }
    return 0.5 * (mb + mb.adjoint());
}

namespace {

CMat as_matrix(const EtProblem& pb, const CVec& x) { return unvec(x, pb.dims.n_t, pb.dims.l); }

CVec hth_apply(const CMat& h, const CVec& x) {
    return htilde_adjoint(h, htilde_apply(h, x), static_cast<int>(x.size() / h.cols()));
}

}  // namespace

EtSurrogate make_et_surrogate(const EtProblem& pb, const CVec& x_t, const Penalty& pen,
                              double lam_hth) {
    require(x_t.size() == pb.dims.tx_len(), "make_et_surrogate: dimension mismatch");
    const EtQuadratic q = et_quadratic(as_matrix(pb, x_t), pb.c_aa, pb.sigma_v_sq, pb.model);
    EtSurrogate s;
    s.x_t = x_t;
    s.l_t = build_lt(pb.dims, pb.c_aa, q.m_inv_l);
    const CMat mt = build_mtilde(q.m_inv_l, pb.model);
    s.m_bar = build_mbar(pb.dims, pb.c_aa, mt);
    s.lam_mbar = lambda_max_bound(s.m_bar);
    s.lam_hth = lam_hth;
    s.rho = pb.h.rows() > 0 ? pen.rho : 0.0;
    s.trace_w = q.m_inv_l.squaredNorm();
    s.trace_gain = q.trace_gain;
    s.m_t = s.l_t + s.lam_mbar * x_t - s.m_bar * x_t;
    if (s.rho > 0.0)
        s.m_t += s.rho * (htilde_adjoint(pb.h, pen.target, pb.dims.l) + lam_hth * x_t -
                          hth_apply(pb.h, x_t));
    return s;
}

double et_true_objective(const EtProblem& pb, const CVec& x, const Penalty& pen) {
    const EtQuadratic q = et_quadratic(as_matrix(pb, x), pb.c_aa, pb.sigma_v_sq, pb.model);
    return -q.trace_gain + penalty_value(pb.h, x, pen);
}

double et_taylor_value(const EtProblem& pb, const EtSurrogate& sur, const CVec& x,
                       const Penalty& pen) {
    return -2.0 * std::real(sur.l_t.dot(x)) + std::real(x.dot(sur.m_bar * x)) +
           pb.model.noise_scale * pb.sigma_v_sq * sur.trace_w + penalty_value(pb.h, x, pen);
}

double et_majorizer_value(const EtProblem& pb, const EtSurrogate& sur, const CVec& x,
                          const Penalty& pen) {
    const double lam = sur.lam_mbar + sur.rho * sur.lam_hth;
    auto iso = [&](const CVec& v) { return lam * v.squaredNorm() - 2.0 * std::real(sur.m_t.dot(v)); };
    return iso(x) + et_taylor_value(pb, sur, sur.x_t, pen) - iso(sur.x_t);
}

CVec mm_update_et(const EtProblem& pb, const EtSurrogate& sur) {
    const double den = sur.lam_mbar + sur.rho * sur.lam_hth;
    if (!(den > 0.0))
        return sur.x_t;
    return project_power_ball(sur.m_t / den, pb.power);
}

InnerResult solve_x_et(const EtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                       int max_iter, double lam_hth) {
    require(x_init.size() == pb.dims.tx_len(), "solve_x_et: dimension mismatch");
    require(x_init.squaredNorm() <= pb.power * (1.0 + 1e-9), "solve_x_et: x_init outside power ball");
    InnerResult res;
    res.x = x_init;
    EtSurrogate sur = make_et_surrogate(pb, x_init, pen, lam_hth);
    double f = -sur.trace_gain + penalty_value(pb.h, x_init, pen);
    res.history.push_back(f);
    for (int it = 0; it < max_iter; ++it) {
        res.x = mm_update_et(pb, sur);
        res.iterations = it + 1;
        sur = make_et_surrogate(pb, res.x, pen, lam_hth);
        const double fn = -sur.trace_gain + penalty_value(pb.h, res.x, pen);
        res.history.push_back(fn);
        const double change = std::abs(fn - f);
        f = fn;
        if (change <= tol * std::max(std::abs(fn), 1e-300))
            break;
    }
    res.objective = f;
    return res;
}

InnerResult solve_x_et_qu(const EtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                          int max_iter, double lam_hth) {
    EtProblem qu = pb;
    qu.model = EtModel::unquantized();
    return solve_x_et(qu, x_init, pen, tol, max_iter, lam_hth);
}

}  // namespace isac
