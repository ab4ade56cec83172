#pragma once

#include "isac/core.hpp"

#include <cstdint>
#include <functional>

namespace isac {

/// Cholesky-based solver for Hermitian positive definite matrices.
/// Retries with diagonal jitter 1e-12 * tr(A)/N (growing x10) if the plain
/// factorization fails.
class HermitianSolver {
public:
    explicit HermitianSolver(const CMat& a);

    CVec solve(const CVec& b) const;
    CMat solve(const CMat& b) const;
    CMat inverse() const;
    double log_det() const;
    double jitter() const { return jitter_; }
    int size() const { return static_cast<int>(llt_.matrixLLT().rows()); }

private:
    Eigen::LLT<CMat> llt_;
    double jitter_ = 0.0;
};

/// Hermitian PSD square root via eigendecomposition. Eigenvalues in
/// [-tol * max(1, |lambda_max|), 0) are clamped to zero; anything more
/// negative throws NotPsdError.
CMat sqrt_psd(const CMat& a, double tol = 1e-10);

/// Throws NotPsdError unless `a` is Hermitian (to 1e-9 relative) and has no
/// eigenvalue below -tol * max(1, |lambda_max|).
void require_hermitian_psd(const CMat& a, const char* what, double tol = 1e-10);

double hermitian_error(const CMat& a);

using LinearMap = std::function<CVec(const CVec&)>;

struct PowerIterationResult {
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Largest eigenvalue of a Hermitian PSD operator by power iteration with a
/// fixed start vector drawn from `seed`.
PowerIterationResult power_iteration(const LinearMap& apply, int n, std::uint64_t seed,
                                     double rel_tol = 1e-8, int max_iter = 10000);

/// Scales x onto the ball ||x||^2 <= power when it lies outside.
CVec project_power_ball(const CVec& x, double power);

/// Dense Kronecker product; refuses results above max_entries.
CMat kron(const CMat& a, const CMat& b, long max_entries = 1L << 22);

}  // namespace isac
