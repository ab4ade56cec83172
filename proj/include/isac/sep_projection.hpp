#pragma once

#include "isac/comm_sep.hpp"
#include "isac/core.hpp"

#include <vector>

namespace isac {

/// One real dimension of one user:
///   minimize sum_l (u_l - chi_l)^2
///   s.t. (s_l - 1) d + b_l <= u_l <= (s_l + 1) d - a_l,  d >= gamma.
/// a_l or b_l equal to kNoBound drops that side.
struct UserQpInstance {
    RVec chi, s, a, b;
    double gamma = 0.0;

    int length() const { return static_cast<int>(chi.size()); }
};

struct UserQpSolution {
    double d = 0.0;
    RVec u;
    double objective = 0.0;
};

/// Ascending breakpoints {gamma, ..., +inf} of the piecewise quadratic p(d).
std::vector<double> boundary_points(const UserQpInstance& inst);

/// Optimal u for a fixed d (box clamp) and the resulting objective.
UserQpSolution user_qp_at(const UserQpInstance& inst, double d);

/// Exact minimizer by enumerating the intervals between breakpoints.
UserQpSolution solve_user_qp(const UserQpInstance& inst);

/// Golden-section search on the convex reduced objective p(d); an
/// independent check on solve_user_qp.
UserQpSolution solve_user_qp_reference(const UserQpInstance& inst, int iterations = 300);

struct BlockSolution {
    CMat u;    // K x L
    RVec d;    // [d_re; d_im], length 2K
    double objective = 0.0;
};

/// Real part of user k uses row k of the spec's real thresholds; imaginary
/// part uses the imaginary ones.
UserQpInstance user_instance(const CMat& lambda_tilde, const SepSpec& spec, int k, bool imag);

/// Projects lambda_tilde onto the SEP-feasible set by 2K independent user QPs.
BlockSolution solve_block(const CMat& lambda_tilde, const SepSpec& spec);
BlockSolution solve_block_reference(const CMat& lambda_tilde, const SepSpec& spec);

/// u from a given d by clamping each entry into its feasible box.
CMat clamp_to_sep(const CMat& target, const RVec& d, const SepSpec& spec);

}  // namespace isac
