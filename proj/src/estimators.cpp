#include "isac/estimators.hpp"

#include "isac/linalg.hpp"
#include "isac/parallel.hpp"
#include "isac/quantization.hpp"
#include "isac/rng.hpp"
#include "isac/structured.hpp"

namespace isac {

namespace {

Eigen::LLT<CMat> llt_with_jitter(const CMat& a) {
    Eigen::LLT<CMat> llt(a);
    if (llt.info() == Eigen::Success)
        return llt;
    const double base = std::abs(a.trace().real()) / std::max<Eigen::Index>(a.rows(), 1);
    double j = 1e-12 * base;
    for (int attempt = 0; attempt < 8; ++attempt, j *= 10.0) {
        CMat b = a;
        b.diagonal().array() += j;
        llt.compute(b);
        if (llt.info() == Eigen::Success)
            return llt;
    }
    throw NotPsdError("llt_with_jitter: matrix is not positive definite");
}

}  // namespace

CMat pt_czz_exact(const CVec& x, const ArrayDims& dims, double theta, double sigma_alpha_sq,
                  double sigma_v_sq) {
    const PtEchoCovariance c = crr_pt(x, dims, PtTarget{theta, sigma_alpha_sq}, sigma_v_sq);
    return covariance_czz_exact(c.dense().c_rr);
}

PtMleSearcher::PtMleSearcher(const CVec& x, const ArrayDims& dims, double sigma_alpha_sq,
                             double sigma_v_sq, MleConfig cfg)
    : x_(x), dims_(dims), sigma_alpha_sq_(sigma_alpha_sq), sigma_v_sq_(sigma_v_sq), cfg_(cfg) {
    require(cfg_.coarse_grid_step > 0.0, "MleConfig: coarse_grid_step must be positive");
    require(cfg_.refine_shrink > 0.0 && cfg_.refine_shrink < 1.0,
            "MleConfig: refine_shrink must lie in (0, 1)");
    require(cfg_.refine_levels >= 0 && cfg_.refine_half_width >= 1, "MleConfig: bad refinement");
    const double lo = -kPi / 2, hi = kPi / 2;
    for (int i = 0;; ++i) {
        const double t = lo + i * cfg_.coarse_grid_step;
        if (t > hi + 1e-12)
            break;
        grid_.push_back(std::min(t, hi));
    }
    if (grid_.back() < hi - 1e-12)
        grid_.push_back(hi);
    coarse_.reserve(grid_.size());
    for (double t : grid_)
        coarse_.push_back(factor(t));
}

Eigen::LLT<CMat> PtMleSearcher::factor(double theta) const {
    return llt_with_jitter(pt_czz_exact(x_, dims_, theta, sigma_alpha_sq_, sigma_v_sq_));
}

double PtMleSearcher::evaluate(const Eigen::LLT<CMat>& llt, const CVec& z) {
    const CVec u = llt.matrixL().solve(z);
    double logdet = 0.0;
    const auto& m = llt.matrixLLT();
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        logdet += std::log(m(i, i).real());
    return u.squaredNorm() + 2.0 * logdet;
}

double PtMleSearcher::objective(const CVec& z, double theta) const {
    return evaluate(factor(theta), z);
}

double PtMleSearcher::coarse_objective(const CVec& z, int index) const {
    return evaluate(coarse_[index], z);
}

double PtMleSearcher::estimate(const CVec& z) const {
    if (z.size() != dims_.rx_len())
        throw std::invalid_argument("mle_pt: observation length mismatch");
    double best_t = grid_[0];
    double best_v = evaluate(coarse_[0], z);
    for (size_t i = 1; i < grid_.size(); ++i) {
        const double v = evaluate(coarse_[i], z);
        if (v < best_v) {
            best_v = v;
            best_t = grid_[i];
        }
    }
    double step = cfg_.coarse_grid_step;
    for (int level = 0; level < cfg_.refine_levels; ++level) {
        step *= cfg_.refine_shrink;
        const double center = best_t;
        for (int j = -cfg_.refine_half_width; j <= cfg_.refine_half_width; ++j) {
            if (j == 0)
                continue;
            const double t = center + j * step;
            if (t < -kPi / 2 || t > kPi / 2)
                continue;
            const double v = objective(z, t);
            if (v < best_v || (v == best_v && t < best_t)) {
                best_v = v;
                best_t = t;
            }
        }
    }
    return best_t;
}

double mle_pt(const CVec& z, const CVec& x, const ArrayDims& dims, double sigma_alpha_sq,
              double sigma_v_sq, const MleConfig& cfg) {
    return PtMleSearcher(x, dims, sigma_alpha_sq, sigma_v_sq, cfg).estimate(z);
}

BlmmseEstimator::BlmmseEstimator(const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    const Eigen::Index n_t = x.rows();
    if (n_t == 0 || c_aa.rows() % n_t != 0)
        throw std::invalid_argument("BlmmseEstimator: dimension mismatch");
    const int n_r = static_cast<int>(c_aa.rows() / n_t);
    const CMat c_rr = crr_et(x, c_aa, sigma_v_sq).c_rr;
    const RVec f = bussgang_gain(c_rr);
    const CMat c_zz = covariance_czz_exact(c_rr);
    const CMat c_za = f.cast<cd>().asDiagonal() * xtilde_left(x, c_aa, n_r);  // F X~ C_aa
    const HermitianSolver solver(c_zz);
    gain_ = solver.solve(c_za).adjoint();
    analytic_mse_ = std::real(c_aa.trace()) - std::real((gain_ * c_za).trace());
}

CVec blmmse_et(const CVec& z, const CMat& x, const CMat& c_aa, double sigma_v_sq) {
    return BlmmseEstimator(x, c_aa, sigma_v_sq).estimate(z);
}

MseSummary summarize(std::vector<TrialRecord> records, double normalization) {
    MseSummary s;
    double sum = 0.0, sum2 = 0.0;
    for (const auto& r : records) {
        if (r.failed) {
            ++s.n_failed;
            continue;
        }
        const double v = r.squared_error / normalization;
        sum += v;
        sum2 += v * v;
        ++s.n_ok;
    }
    if (s.n_ok > 0) {
        s.mean = sum / s.n_ok;
        if (s.n_ok > 1) {
            const double var = std::max(0.0, (sum2 - s.n_ok * s.mean * s.mean) / (s.n_ok - 1));
            s.std_error = std::sqrt(var / s.n_ok);
        }
    }
    s.records = std::move(records);
    return s;
}

MseSummary run_trials_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                         double sigma_v_sq, int n_trials, std::uint64_t base_seed,
                         const MleConfig& cfg, int threads, AlphaDraw alpha_draw) {
    require(n_trials >= 1, "run_trials_pt: n_trials must be >= 1");
    const PtMleSearcher searcher(x, dims, target.sigma_alpha_sq, sigma_v_sq, cfg);
    const BlockKronOp a = pt_response_operator(dims, target.theta);
    const CVec y = a.apply(x);
    std::vector<TrialRecord> recs(n_trials);
    parallel_for(n_trials, threads, [&](int t) {
        TrialRecord& r = recs[t];
        r.seed = base_seed + static_cast<std::uint64_t>(t);
        r.truth = target.theta;
        try {
            Rng rng(r.seed);
            cd g = rng.cnormal();
            if (alpha_draw == AlphaDraw::UnitModulus)
                g /= std::abs(g);
            const cd alpha = std::sqrt(target.sigma_alpha_sq) * g;
            const CVec noise = std::sqrt(sigma_v_sq) * rng.cnormal_vec(static_cast<int>(y.size()));
            const CVec z = quantize_one_bit(alpha * y + noise);
            r.estimate = searcher.estimate(z);
            r.squared_error = (r.estimate - r.truth) * (r.estimate - r.truth);
        } catch (const std::exception&) {
            r.failed = true;
        }
    });
    return summarize(std::move(recs));
}

MseSummary run_trials_et(const CMat& x, const EtTarget& target, double sigma_v_sq, int n_trials,
                         std::uint64_t base_seed, int threads, EtObservation mode) {
    require(n_trials >= 1, "run_trials_et: n_trials must be >= 1");
    const int n_r = static_cast<int>(target.phi_r.rows());
    const CMat r_half = sqrt_psd(target.phi_r);
    const CMat t_half = sqrt_psd(target.phi_t);
    CMat gain;
    if (mode == EtObservation::OneBit) {
        gain = BlmmseEstimator(x, target.c_aa, sigma_v_sq).gain();
    } else {
        const CMat c_rr = crr_et(x, target.c_aa, sigma_v_sq).c_rr;
        gain = HermitianSolver(c_rr).solve(xtilde_left(x, target.c_aa, n_r)).adjoint();
    }
    std::vector<TrialRecord> recs(n_trials);
    parallel_for(n_trials, threads, [&](int t) {
        TrialRecord& r = recs[t];
        r.seed = base_seed + static_cast<std::uint64_t>(t);
        try {
            Rng rng(r.seed);
            const CVec a = vec(et_sample_sqrt(r_half, t_half, rng));
            CVec obs = xtilde_apply(x, a, n_r);
            obs += std::sqrt(sigma_v_sq) * rng.cnormal_vec(static_cast<int>(obs.size()));
            if (mode == EtObservation::OneBit)
                obs = quantize_one_bit(obs);
            const CVec a_hat = gain * obs;
            r.estimate = a_hat.norm();
            r.truth = a.norm();
            r.squared_error = (a_hat - a).squaredNorm();
        } catch (const std::exception&) {
            r.failed = true;
        }
    });
    return summarize(std::move(recs), std::real(target.c_aa.trace()));
}

}  // namespace isac
