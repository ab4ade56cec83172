#include "isac/sep_projection.hpp"

#include <limits>

namespace isac {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kMergeTol = 1e-12;

double upper_bound(const UserQpInstance& in, int l, double d) {
    return in.a(l) == kNoBound ? kInf : (in.s(l) + 1.0) * d - in.a(l);
}

double lower_bound(const UserQpInstance& in, int l, double d) {
    return in.b(l) == kNoBound ? -kInf : (in.s(l) - 1.0) * d + in.b(l);
}

void check(const UserQpInstance& in) {
    const int n = in.length();
    require(in.s.size() == n && in.a.size() == n && in.b.size() == n,
            "user QP: vector lengths differ");
    require(in.gamma > 0.0, "user QP: gamma must be positive");
}

}  // namespace

std::vector<double> boundary_points(const UserQpInstance& in) {
    check(in);
    std::vector<double> pts;
    for (int l = 0; l < in.length(); ++l) {
        const double den_a = 1.0 + in.s(l);
        if (in.a(l) != kNoBound && den_a != 0.0) {
            const double t = (in.chi(l) + in.a(l)) / den_a;
            if (t > in.gamma)
                pts.push_back(t);
        }
        const double den_b = 1.0 - in.s(l);
        if (in.b(l) != kNoBound && den_b != 0.0) {
            const double t = (in.b(l) - in.chi(l)) / den_b;
            if (t > in.gamma)
                pts.push_back(t);
        }
    }
    std::sort(pts.begin(), pts.end());
    std::vector<double> out{in.gamma};
    for (double t : pts)
        if (t - out.back() > kMergeTol)
            out.push_back(t);
    out.push_back(kInf);
    return out;
}

UserQpSolution user_qp_at(const UserQpInstance& in, double d) {
    UserQpSolution sol;
    sol.d = d;
    sol.u.resize(in.length());
    for (int l = 0; l < in.length(); ++l) {
        const double hi = upper_bound(in, l, d);
        const double lo = lower_bound(in, l, d);
        double u = in.chi(l);
        if (u > hi)
            u = hi;
        else if (u < lo)
            u = lo;
        sol.u(l) = u;
        sol.objective += (u - in.chi(l)) * (u - in.chi(l));
    }
    return sol;
}

UserQpSolution solve_user_qp(const UserQpInstance& in) {
    const std::vector<double> tau = boundary_points(in);
    UserQpSolution best;
    bool have = false;
    for (size_t i = 0; i + 1 < tau.size(); ++i) {
        const double lo = tau[i], hi = tau[i + 1];
        const double probe = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
        double num = 0.0, den = 0.0;
        for (int l = 0; l < in.length(); ++l) {
            if (in.chi(l) > upper_bound(in, l, probe)) {
                const double sp = in.s(l) + 1.0;
                num += sp * (in.a(l) + in.chi(l));
                den += sp * sp;
            } else if (in.chi(l) < lower_bound(in, l, probe)) {
                const double sm = in.s(l) - 1.0;
                num += sm * (in.chi(l) - in.b(l));
                den += sm * sm;
            }
        }
        const double d = den > 0.0 ? std::clamp(num / den, lo, hi) : lo;
        UserQpSolution cand = user_qp_at(in, d);
        if (!have || cand.objective < best.objective) {
            best = std::move(cand);
            have = true;
        }
    }
    return best;
}

UserQpSolution solve_user_qp_reference(const UserQpInstance& in, int iterations) {
    check(in);
    auto p = [&](double d) { return user_qp_at(in, d).objective; };
    // Expand the bracket until p stops decreasing; p is convex in d.
    double lo = in.gamma, width = 1.0;
    while (width < 1e12 && p(lo + 2.0 * width) < p(lo + width))
        width *= 2.0;
    double hi = lo + 2.0 * width;
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = hi - g * (hi - lo), x2 = lo + g * (hi - lo);
    double f1 = p(x1), f2 = p(x2);
    for (int it = 0; it < iterations && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
        if (f1 <= f2) {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = p(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = p(x2);
        }
    }
    UserQpSolution best = user_qp_at(in, 0.5 * (lo + hi));
    const UserQpSolution at_gamma = user_qp_at(in, in.gamma);
    return at_gamma.objective <= best.objective ? at_gamma : best;
}

UserQpInstance user_instance(const CMat& lt, const SepSpec& spec, int k, bool imag) {
    UserQpInstance in;
    in.gamma = spec.gamma;
    if (imag) {
        in.chi = lt.row(k).imag().transpose();
        in.s = spec.s_im.row(k).transpose();
        in.a = spec.a_im.row(k).transpose();
        in.b = spec.b_im.row(k).transpose();
    } else {
        in.chi = lt.row(k).real().transpose();
        in.s = spec.s_re.row(k).transpose();
        in.a = spec.a_re.row(k).transpose();
        in.b = spec.b_re.row(k).transpose();
    }
    return in;
}

namespace {

template <class Solver>
BlockSolution solve_block_with(const CMat& lt, const SepSpec& spec, Solver solver) {
    const int k = spec.users(), l = spec.length();
    require(lt.rows() == k && lt.cols() == l, "solve_block: dimension mismatch");
    BlockSolution out;
    out.u = CMat::Zero(k, l);
    out.d = RVec::Zero(2 * k);
    for (int i = 0; i < k; ++i) {
        const UserQpSolution re = solver(user_instance(lt, spec, i, false));
        const UserQpSolution im = solver(user_instance(lt, spec, i, true));
        out.d(i) = re.d;
        out.d(k + i) = im.d;
        for (int j = 0; j < l; ++j)
            out.u(i, j) = cd(re.u(j), im.u(j));
        out.objective += re.objective + im.objective;
    }
    return out;
}

}  // namespace

BlockSolution solve_block(const CMat& lt, const SepSpec& spec) {
    return solve_block_with(lt, spec, [](const UserQpInstance& in) { return solve_user_qp(in); });
}

BlockSolution solve_block_reference(const CMat& lt, const SepSpec& spec) {
    return solve_block_with(lt, spec,
                            [](const UserQpInstance& in) { return solve_user_qp_reference(in); });
}

CMat clamp_to_sep(const CMat& target, const RVec& d, const SepSpec& spec) {
    const int k = spec.users(), l = spec.length();
    require(target.rows() == k && target.cols() == l && d.size() == 2 * k,
            "clamp_to_sep: dimension mismatch");
    CMat u(k, l);
    for (int i = 0; i < k; ++i) {
        const RVec re = user_qp_at(user_instance(target, spec, i, false), d(i)).u;
        const RVec im = user_qp_at(user_instance(target, spec, i, true), d(k + i)).u;
        for (int j = 0; j < l; ++j)
            u(i, j) = cd(re(j), im(j));
    }
    return u;
}

}  // namespace isac
