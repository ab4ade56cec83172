#pragma once

#include "isac/array_geometry.hpp"
#include "isac/core.hpp"
#include "isac/crb_metrics.hpp"

#include <vector>

namespace isac {

/// Everything the PT x-update needs besides the waveform.
struct PtProblem {
    ArrayDims dims;
    PtTarget target;
    double sigma_v_sq = 1.0;
    double power = 1.0;
    CMat h;  // K x N_t communication channel (K may be 0)
    Resolution resolution = Resolution::OneBit;
};

/// Augmented-Lagrangian penalty rho ||H~ x - t||^2 with t = u - lambda.
struct Penalty {
    double rho = 0.0;
    CVec target;  // vec(U - Lambda), length K L
};

double penalty_value(const CMat& h, const CVec& x, const Penalty& pen);
CVec penalty_gradient(const CMat& h, const CVec& x, const Penalty& pen);

/// MM anchor at x_t: P = C^{-1} C' C^{-1} of the observation model.
struct SurrogateAnchor {
    CVec x;
    PtState state;
    CMat p;
    double fisher = 0.0;
};

SurrogateAnchor make_anchor(const PtProblem& pb, const CVec& x_t);

/// C^{-1} V C^{-1} at the anchor (applies the inverse of C^T kron C to vec(V)).
CMat apply_q_inverse(const SurrogateAnchor& an, const CMat& v);

/// -J(x) + penalty, the objective the surrogate majorizes.
double pt_true_objective(const PtProblem& pb, const CVec& x, const Penalty& pen);

/// -2 tr(P C'(x)) + tr(P C(x) P C(x)) + penalty; equals the true objective at the anchor.
double surrogate_value(const PtProblem& pb, const SurrogateAnchor& an, const CVec& x,
                       const Penalty& pen);

/// Contributions to the conjugate gradient d m / d x^*, one per sub-term.
struct SurrogateGradient {
    CVec m11, m12, m13, m14, m15, m16;  // -2 tr(P C'(x)) through C, C', F and the three F' factors
    CVec m3;                            // tr(P C(x) P C(x))
    CVec m4;                            // penalty
    CVec total() const { return m11 + m12 + m13 + m14 + m15 + m16 + m3 + m4; }
};

enum class PtSubTerm { M11, M12, M13, M14, M15, M16, M3, M4 };

SurrogateGradient surrogate_gradient(const PtProblem& pb, const SurrogateAnchor& an, const CVec& x,
                                     const Penalty& pen);

/// Value of one sub-term with every factor outside its path frozen at x0.
/// Its gradient at x = x0 is the matching SurrogateGradient entry.
double surrogate_subterm_value(const PtProblem& pb, const SurrogateAnchor& an, PtSubTerm term,
                               const CVec& x0, const CVec& x, const Penalty& pen);

struct LineSearchConfig {
    double mu0_scale = 0.1;  // mu0 = mu0_scale * sqrt(P)
    double shrink = 0.5;
    double mu_min = 1e-12;
};

struct PgdStep {
    CVec x;
    bool stalled = false;
    double mu = 0.0;
};

PgdStep pgd_step(const PtProblem& pb, const SurrogateAnchor& an, const Penalty& pen,
                 const LineSearchConfig& cfg = {});

struct InnerResult {
    CVec x;
    int iterations = 0;
    bool stalled = false;
    double objective = 0.0;
    std::vector<double> history;  // true objective after each step, starting at x_init
};

InnerResult solve_x_pt(const PtProblem& pb, const CVec& x_init, const Penalty& pen, double tol,
                       int max_iter, const LineSearchConfig& cfg = {});

}  // namespace isac
