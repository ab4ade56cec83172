#pragma once

#include "isac/array_geometry.hpp"
#include "isac/core.hpp"

#include <cstdint>
#include <vector>

namespace isac {

struct MleConfig {
    double coarse_grid_step = 0.5 * kPi / 180.0;
    int refine_levels = 3;
    double refine_shrink = 0.1;
    int refine_half_width = 10;  // points on each side of the incumbent per level
};

/// One-bit DOA MLE: minimizes z^H C_zz(theta)^{-1} z + ln det C_zz(theta) with
/// the exact arcsine-law C_zz. Coarse-grid factorizations are cached, so one
/// searcher serves every trial that shares the waveform.
class PtMleSearcher {
public:
    PtMleSearcher(const CVec& x, const ArrayDims& dims, double sigma_alpha_sq, double sigma_v_sq,
                  MleConfig cfg = {});

    double estimate(const CVec& z) const;
    double objective(const CVec& z, double theta) const;
    const std::vector<double>& coarse_grid() const { return grid_; }
    double coarse_objective(const CVec& z, int index) const;

private:
    Eigen::LLT<CMat> factor(double theta) const;
    static double evaluate(const Eigen::LLT<CMat>& llt, const CVec& z);

    CVec x_;
    ArrayDims dims_;
    double sigma_alpha_sq_, sigma_v_sq_;
    MleConfig cfg_;
    std::vector<double> grid_;
    std::vector<Eigen::LLT<CMat>> coarse_;
};

/// Exact arcsine-law C_zz of the PT echo at a given angle.
CMat pt_czz_exact(const CVec& x, const ArrayDims& dims, double theta, double sigma_alpha_sq,
                  double sigma_v_sq);

double mle_pt(const CVec& z, const CVec& x, const ArrayDims& dims, double sigma_alpha_sq,
              double sigma_v_sq, const MleConfig& cfg = {});

/// Bussgang LMMSE estimator a_hat = C_aa X~^H F C_zz^{-1} z with exact C_zz.
class BlmmseEstimator {
public:
    BlmmseEstimator(const CMat& x, const CMat& c_aa, double sigma_v_sq);

    CVec estimate(const CVec& z) const { return gain_ * z; }
    const CMat& gain() const { return gain_; }
    /// tr(C_aa) - tr(C_az C_zz^{-1} C_za) under the exact C_zz.
    double analytic_mse() const { return analytic_mse_; }

private:
    CMat gain_;
    double analytic_mse_ = 0.0;
};

CVec blmmse_et(const CVec& z, const CMat& x, const CMat& c_aa, double sigma_v_sq);

struct TrialRecord {
    double estimate = 0.0;  // PT: theta_hat; ET: ||a_hat||
    double truth = 0.0;     // PT: theta; ET: ||a||
    double squared_error = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
};

struct MseSummary {
    double mean = 0.0;
    double std_error = 0.0;
    int n_ok = 0;
    int n_failed = 0;
    std::vector<TrialRecord> records;
};

MseSummary summarize(std::vector<TrialRecord> records, double normalization = 1.0);

/// Reflection coefficient draw: a CN(0, 1) sample normalized to unit modulus,
/// or the raw CN(0, 1) sample. Both are scaled by sqrt(sigma_alpha^2).
enum class AlphaDraw { UnitModulus, Gaussian };

/// Monte-Carlo MSE of the one-bit MLE. Trial t draws alpha, noise from seed base_seed + t.
MseSummary run_trials_pt(const CVec& x, const ArrayDims& dims, const PtTarget& target,
                         double sigma_v_sq, int n_trials, std::uint64_t base_seed,
                         const MleConfig& cfg = {}, int threads = 1,
                         AlphaDraw alpha_draw = AlphaDraw::UnitModulus);

enum class EtObservation { OneBit, Unquantized };

/// Monte-Carlo MSE of the BLMMSE estimator, normalized by tr(C_aa). The
/// unquantized mode applies the plain LMMSE to r (debug path).
MseSummary run_trials_et(const CMat& x, const EtTarget& target, double sigma_v_sq, int n_trials,
                         std::uint64_t base_seed, int threads = 1,
                         EtObservation mode = EtObservation::OneBit);

}  // namespace isac
