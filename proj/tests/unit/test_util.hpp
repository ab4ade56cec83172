#pragma once

#include "isac/core.hpp"
#include "isac/rng.hpp"

#include <functional>

namespace isac::tu {

/// Central-difference conjugate gradient (d/dRe + j d/dIm) / 2 of a real function.
inline CVec fd_conj_gradient(const std::function<double(const CVec&)>& f, const CVec& x,
                             double h = 1e-6) {
    CVec g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        CVec xp = x, xm = x;
        xp(i) += h;
        xm(i) -= h;
        const double dre = (f(xp) - f(xm)) / (2 * h);
        xp = x;
        xm = x;
        xp(i) += cd(0, h);
        xm(i) -= cd(0, h);
        const double dim = (f(xp) - f(xm)) / (2 * h);
        g(i) = 0.5 * cd(dre, dim);
    }
    return g;
}

inline double rel_err(const CVec& a, const CVec& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

inline CVec random_in_ball(Rng& rng, int n, double power) {
    CVec x = rng.cnormal_vec(n);
    return x * (std::sqrt(power) * std::sqrt(rng.uniform()) / x.norm());
}

inline CMat random_hpd(Rng& rng, int n) {
    const CMat a = rng.cnormal_mat(n, n);
    CMat c = a * a.adjoint() / n;
    c.diagonal().array() += 0.1;
    return c;
}

}  // namespace isac::tu
