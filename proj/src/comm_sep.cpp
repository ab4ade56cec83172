#include "isac/comm_sep.hpp"

namespace isac {

double q_function(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double q_inverse(double p) {
    if (!(p > 0.0 && p < 1.0))
        throw std::invalid_argument("q_inverse: p must lie in (0, 1)");
    // Q is decreasing; bracket, then Newton with a bisection fallback.
    double lo = -40.0, hi = 40.0;
    double x = 0.0;
    for (int it = 0; it < 200; ++it) {
        const double fx = q_function(x) - p;
        if (fx > 0.0)
            lo = x;
        else
            hi = x;
        const double dens = std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi);
        double next = dens > 0.0 ? x + fx / dens : 0.5 * (lo + hi);
        if (!(next > lo && next < hi))
            next = 0.5 * (lo + hi);
        if (std::abs(next - x) < 1e-14 || hi - lo < 1e-14)
            return next;
        x = next;
    }
    return x;
}

int QamSymbols::levels_max() const {
    return static_cast<int>(std::lround(std::sqrt(static_cast<double>(order)))) - 1;
}

void validate_qam_order(int order) {
    const int r = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    if (order < 4 || r * r != order)
        throw std::invalid_argument("QAM order must be a perfect square >= 4");
}

QamSymbols random_qam(int k, int l, int order, Rng& rng) {
    validate_qam_order(order);
    QamSymbols q;
    q.order = order;
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(order))));
    q.s.resize(k, l);
    for (int j = 0; j < l; ++j)
        for (int i = 0; i < k; ++i) {
            const double re = 2.0 * rng.uniform_int(side) - (side - 1);
            const double im = 2.0 * rng.uniform_int(side) - (side - 1);
            q.s(i, j) = cd(re, im);
        }
    return q;
}

double sep_gamma(double epsilon, double sigma_w) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw std::invalid_argument("SEP target epsilon must lie in (0, 1)");
    return sigma_w / std::sqrt(2.0) * q_inverse((1.0 - std::sqrt(1.0 - epsilon)) / 2.0);
}

namespace {

bool is_level(double v, int levels_max) {
    const double r = std::round(v);
    if (std::abs(v - r) > 1e-9)
        return false;
    const long n = std::lround(r);
    return (n % 2 != 0) && std::labs(n) <= levels_max;
}

void thresholds(double level, int levels_max, double inner, double outer, double& a, double& b) {
    if (std::abs(level) < levels_max) {
        a = b = inner;
    } else if (level > 0) {
        a = kNoBound;
        b = outer;
    } else {
        a = outer;
        b = kNoBound;
    }
}

}  // namespace

SepSpec build_sep_spec(const QamSymbols& s, double epsilon, double sigma_w) {
    validate_qam_order(s.order);
    require(sigma_w > 0.0, "build_sep_spec: sigma_w must be positive");
    const int lm = s.levels_max();
    SepSpec sp;
    sp.epsilon = epsilon;
    sp.sigma_w = sigma_w;
    sp.order = s.order;
    sp.gamma = sep_gamma(epsilon, sigma_w);
    const double outer = sigma_w / std::sqrt(2.0) * q_inverse(1.0 - std::sqrt(1.0 - epsilon));
    const Eigen::Index k = s.s.rows(), l = s.s.cols();
    sp.s_re = s.s.real();
    sp.s_im = s.s.imag();
    sp.a_re.resize(k, l);
    sp.b_re.resize(k, l);
    sp.a_im.resize(k, l);
    sp.b_im.resize(k, l);
    for (Eigen::Index j = 0; j < l; ++j)
        for (Eigen::Index i = 0; i < k; ++i) {
            if (!is_level(sp.s_re(i, j), lm) || !is_level(sp.s_im(i, j), lm))
                throw std::invalid_argument("build_sep_spec: symbol outside the constellation");
            thresholds(sp.s_re(i, j), lm, sp.gamma, outer, sp.a_re(i, j), sp.b_re(i, j));
            thresholds(sp.s_im(i, j), lm, sp.gamma, outer, sp.a_im(i, j), sp.b_im(i, j));
        }
    return sp;
}

SepCheck sep_constraints_satisfied(const CMat& u, const RVec& d, const SepSpec& spec, double tol) {
    const int k = spec.users(), l = spec.length();
    require(u.rows() == k && u.cols() == l && d.size() == 2 * k,
            "sep_constraints_satisfied: dimension mismatch");
    double worst = std::numeric_limits<double>::infinity();
    auto upd = [&](double slack) { worst = std::min(worst, slack); };
    for (int i = 0; i < k; ++i) {
        upd(d(i) - spec.gamma);
        upd(d(k + i) - spec.gamma);
        for (int j = 0; j < l; ++j) {
            const double er = u(i, j).real() - d(i) * spec.s_re(i, j);
            const double ei = u(i, j).imag() - d(k + i) * spec.s_im(i, j);
            if (spec.a_re(i, j) != kNoBound)
                upd(d(i) - spec.a_re(i, j) - er);
            if (spec.b_re(i, j) != kNoBound)
                upd(er - (-d(i) + spec.b_re(i, j)));
            if (spec.a_im(i, j) != kNoBound)
                upd(d(k + i) - spec.a_im(i, j) - ei);
            if (spec.b_im(i, j) != kNoBound)
                upd(ei - (-d(k + i) + spec.b_im(i, j)));
        }
    }
    if (k == 0)
        worst = 0.0;
    return {worst >= -tol, worst};
}

double slice_level(double v, int levels_max) {
    double lvl = 2.0 * std::floor(v / 2.0) + 1.0;
    return std::clamp(lvl, -static_cast<double>(levels_max), static_cast<double>(levels_max));
}

RVec empirical_ser(const CMat& x, const CMat& h, const QamSymbols& s, const RVec& d,
                   double sigma_w, int n_noise_draws, std::uint64_t seed) {
    require(n_noise_draws >= 1, "empirical_ser: n_noise_draws must be >= 1");
    const Eigen::Index k = h.rows(), l = x.cols();
    require(h.cols() == x.rows() && s.s.rows() == k && s.s.cols() == l && d.size() == 2 * k,
            "empirical_ser: dimension mismatch");
    const int lm = s.levels_max();
    const CMat hx = h * x;
    Rng rng(seed);
    RVec errors = RVec::Zero(k);
    for (int n = 0; n < n_noise_draws; ++n) {
        const CMat w = sigma_w * rng.cnormal_mat(static_cast<int>(k), static_cast<int>(l));
        for (Eigen::Index j = 0; j < l; ++j)
            for (Eigen::Index i = 0; i < k; ++i) {
                const cd y = hx(i, j) + w(i, j);
                const double re = slice_level(y.real() / d(i), lm);
                const double im = slice_level(y.imag() / d(k + i), lm);
                if (re != s.s(i, j).real() || im != s.s(i, j).imag())
                    errors(i) += 1.0;
            }
    }
    return errors / (static_cast<double>(n_noise_draws) * static_cast<double>(l));
}

}  // namespace isac
