#include "isac/admm.hpp"

#include "isac/crb_metrics.hpp"
#include "isac/opt_et.hpp"
#include "isac/opt_pt.hpp"
#include "isac/sep_projection.hpp"
#include "isac/structured.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>

namespace isac {

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::PT: return "PT";
        case Variant::ET: return "ET";
        case Variant::ET_QU: return "ET_QU";
        case Variant::PT_INF: return "PT_INF";
    }
    return "?";
}

Variant parse_variant(const std::string& name) {
    std::string s = name;
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
    if (s == "PT") return Variant::PT;
    if (s == "ET") return Variant::ET;
    if (s == "ET_QU") return Variant::ET_QU;
    if (s == "PT_INF") return Variant::PT_INF;
    throw std::invalid_argument("unknown variant: " + name);
}

void AdmmConfig::validate() const {
    require(rho0 > 0.0 && c_rho > 1.0 && rho_max >= rho0, "AdmmConfig: bad penalty schedule");
    require(tol_residual > 0.0 && tol_objective > 0.0 && inner_tol > 0.0,
            "AdmmConfig: tolerances must be positive");
    require(max_outer >= 1 && max_inner >= 1, "AdmmConfig: iteration budgets must be >= 1");
}

AdmmInit admm_initialize(const Scenario& sc, std::uint64_t seed) {
    Rng rng(seed);
    AdmmInit in;
    in.x = rng.cnormal_vec(sc.dims.tx_len());
    in.x *= std::sqrt(sc.power) / in.x.norm();
    const int k = sc.users();
    in.lambda = CVec::Zero(static_cast<Eigen::Index>(k) * sc.dims.l);
    in.d = RVec::Constant(2 * k, sc.sep.gamma);
    const CMat hx = unvec(htilde_apply(sc.h, in.x), k, sc.dims.l);
    in.u = k > 0 ? clamp_to_sep(hx, in.d, sc.sep) : CMat(0, sc.dims.l);
    return in;
}

namespace {

bool is_et(Variant v) { return v == Variant::ET || v == Variant::ET_QU; }

CMat waveform(const Scenario& sc, const CVec& x) { return unvec(x, sc.dims.n_t, sc.dims.l); }

}  // namespace

double variant_objective(const Scenario& sc, Variant v, const CVec& x) {
    const double tr = std::real(sc.et.c_aa.trace());
    switch (v) {
        case Variant::PT:
            return crb_pt(x, sc.dims, sc.pt, sc.sigma_v_sq);
        case Variant::PT_INF:
            return crb_pt_infinite_resolution(x, sc.dims, sc.pt, sc.sigma_v_sq);
        case Variant::ET:
            return crb_et(waveform(sc, x), sc.et.c_aa, sc.sigma_v_sq) / tr;
        case Variant::ET_QU:
            return mse_et_quantization_unaware(waveform(sc, x), sc.et.c_aa, sc.sigma_v_sq) / tr;
    }
    return 0.0;
}

double variant_crb(const Scenario& sc, Variant v, const CVec& x) {
    return is_et(v) ? variant_objective(sc, Variant::ET, x) : variant_objective(sc, Variant::PT, x);
}

AdmmResult admm_run(const Scenario& sc, Variant v, const AdmmConfig& cfg, const AdmmInit& init) {
    cfg.validate();
    const int k = sc.users(), l = sc.dims.l;
    require(init.x.size() == sc.dims.tx_len(), "admm_run: x_init has the wrong length");
    require(init.x.squaredNorm() <= sc.power * (1.0 + 1e-9), "admm_run: x_init outside power ball");

    const auto t0 = std::chrono::steady_clock::now();
    AdmmResult res;
    res.x = init.x;
    res.u = init.u;
    res.d = init.d;
    res.lambda = init.lambda;

    PtProblem ptp{sc.dims, sc.pt, sc.sigma_v_sq, sc.power, sc.h,
                  v == Variant::PT_INF ? Resolution::Infinite : Resolution::OneBit};
    EtProblem etp{sc.dims, sc.et.c_aa, sc.sigma_v_sq, sc.power, sc.h, EtModel::one_bit()};
    const double lam_h = is_et(v) ? lambda_max_hth(sc.h) : 0.0;

    double rho = cfg.rho0;
    double prev_obj = variant_objective(sc, v, res.x);
    for (int it = 0; it < cfg.max_outer; ++it) {
        Penalty pen{rho, vec(res.u) - res.lambda};
        InnerResult inner;
        if (v == Variant::ET)
            inner = solve_x_et(etp, res.x, pen, cfg.inner_tol, cfg.max_inner, lam_h);
        else if (v == Variant::ET_QU)
            inner = solve_x_et_qu(etp, res.x, pen, cfg.inner_tol, cfg.max_inner, lam_h);
        else
            inner = solve_x_pt(ptp, res.x, pen, cfg.inner_tol, cfg.max_inner);
        res.x = inner.x;

        double residual = 0.0;
        if (k > 0) {
            const CVec hx = htilde_apply(sc.h, res.x);
            const BlockSolution blk = solve_block(unvec(hx + res.lambda, k, l), sc.sep);
            res.u = blk.u;
            res.d = blk.d;
            const CVec r = hx - vec(res.u);
            res.lambda += r;
            residual = r.squaredNorm();
        }

        const double obj = variant_objective(sc, v, res.x);
        res.trace.residual.push_back(residual);
        res.trace.objective.push_back(obj);
        res.trace.crb.push_back(variant_crb(sc, v, res.x));
        res.trace.rho.push_back(rho);
        res.trace.wall_ms.push_back(
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
        res.outer_iterations = it + 1;

        if (!std::isfinite(obj)) {
            res.aborted = true;
            res.message = "non-finite objective at outer iteration " + std::to_string(it + 1);
            return res;
        }
        const double change = std::abs(obj - prev_obj) / std::max(std::abs(prev_obj), 1e-300);
        prev_obj = obj;
        if (residual < cfg.tol_residual && change < cfg.tol_objective) {
            res.converged = true;
            break;
        }
        const double rho_new = std::min(cfg.c_rho * rho, cfg.rho_max);
        res.lambda *= rho / rho_new;
        rho = rho_new;
    }
    return res;
}

}  // namespace isac
