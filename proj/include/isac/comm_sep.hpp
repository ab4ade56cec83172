#pragma once

#include "isac/core.hpp"
#include "isac/rng.hpp"

#include <cstdint>
#include <limits>

namespace isac {

inline constexpr double kNoBound = -std::numeric_limits<double>::infinity();

/// Standard Gaussian tail probability.
double q_function(double x);
/// Inverse of q_function on (0, 1).
double q_inverse(double p);

struct QamSymbols {
    int order = 16;
    CMat s;  // K x L

    int levels_max() const;  // sqrt(M) - 1
};

void validate_qam_order(int order);
/// Each real and imaginary part drawn uniformly from {+-1, +-3, ..., +-(sqrt(M)-1)}.
QamSymbols random_qam(int k, int l, int order, Rng& rng);

/// Per-symbol thresholds of the linearized SEP constraints. kNoBound marks
/// an inequality that does not apply (outermost constellation levels).
struct SepSpec {
    RMat a_re, b_re, a_im, b_im;  // K x L
    RMat s_re, s_im;              // K x L constellation levels
    double gamma = 0.0;
    double epsilon = 0.0;
    double sigma_w = 0.0;
    int order = 16;

    int users() const { return static_cast<int>(s_re.rows()); }
    int length() const { return static_cast<int>(s_re.cols()); }
};

/// (sigma_w / sqrt 2) Qinv((1 - sqrt(1 - eps)) / 2).
double sep_gamma(double epsilon, double sigma_w);
SepSpec build_sep_spec(const QamSymbols& s, double epsilon, double sigma_w);

struct SepCheck {
    bool ok = false;
    double worst_margin = 0.0;  // smallest slack over all inequalities; negative means violated
};

/// Checks -d + b <= Re(u) - d s <= d - a (and the imaginary twin) plus d >= gamma.
/// d = [d_re; d_im] of length 2K.
SepCheck sep_constraints_satisfied(const CMat& u, const RVec& d, const SepSpec& spec,
                                   double tol = 1e-9);

/// Nearest level of {+-1, ..., +-(sqrt(M)-1)}.
double slice_level(double v, int levels_max);

/// Monte-Carlo per-user symbol error rate of Y = H X + W equalized by d and
/// hard-sliced per real dimension.
RVec empirical_ser(const CMat& x, const CMat& h, const QamSymbols& s, const RVec& d,
                   double sigma_w, int n_noise_draws, std::uint64_t seed);

}  // namespace isac
