#include "isac/linalg.hpp"

#include "isac/rng.hpp"

#include <Eigen/Eigenvalues>

namespace isac {

HermitianSolver::HermitianSolver(const CMat& a) {
    require(a.rows() == a.cols(), "HermitianSolver: matrix must be square");
    const int n = static_cast<int>(a.rows());
    llt_.compute(a);
    if (llt_.info() == Eigen::Success)
        return;
    const double base = std::max(std::abs(a.trace().real()) / std::max(n, 1), 1e-300);
    double j = 1e-12 * base;
    for (int attempt = 0; attempt < 8; ++attempt, j *= 10.0) {
        CMat b = a;
        b.diagonal().array() += j;
        llt_.compute(b);
        if (llt_.info() == Eigen::Success) {
            jitter_ = j;
            return;
        }
    }
    throw NotPsdError("HermitianSolver: matrix is not positive definite");
}

CVec HermitianSolver::solve(const CVec& b) const { return llt_.solve(b); }

CMat HermitianSolver::solve(const CMat& b) const { return llt_.solve(b); }

CMat HermitianSolver::inverse() const {
    const auto n = llt_.matrixLLT().rows();
    return llt_.solve(CMat::Identity(n, n));
}

double HermitianSolver::log_det() const {
    const auto& l = llt_.matrixLLT();
    double s = 0.0;
    for (Eigen::Index i = 0; i < l.rows(); ++i)
        s += std::log(l(i, i).real());
    return 2.0 * s;
}

double hermitian_error(const CMat& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    return (a - a.adjoint()).cwiseAbs().maxCoeff() / scale;
}

namespace {

Eigen::SelfAdjointEigenSolver<CMat> checked_eig(const CMat& a, const char* what, double tol) {
    if (a.rows() != a.cols())
        throw std::invalid_argument(std::string(what) + ": matrix must be square");
    if (hermitian_error(a) > 1e-9)
        throw NotPsdError(std::string(what) + ": matrix is not Hermitian");
    Eigen::SelfAdjointEigenSolver<CMat> eig(a);
    if (eig.info() != Eigen::Success)
        throw NotPsdError(std::string(what) + ": eigendecomposition failed");
    const auto& ev = eig.eigenvalues();
    if (ev.size() > 0) {
        const double floor = -tol * std::max(1.0, std::abs(ev(ev.size() - 1)));
        if (ev(0) < floor)
            throw NotPsdError(std::string(what) + ": matrix has a negative eigenvalue");
    }
    return eig;
}

}  // namespace

void require_hermitian_psd(const CMat& a, const char* what, double tol) {
    checked_eig(a, what, tol);
}

CMat sqrt_psd(const CMat& a, double tol) {
    auto eig = checked_eig(a, "sqrt_psd", tol);
    RVec s = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const CMat& v = eig.eigenvectors();
    return v * s.cast<cd>().asDiagonal() * v.adjoint();
}

PowerIterationResult power_iteration(const LinearMap& apply, int n, std::uint64_t seed,
                                     double rel_tol, int max_iter) {
    PowerIterationResult res;
    if (n == 0)
        return res;
    Rng rng(seed);
    CVec v = rng.cnormal_vec(n);
    v.normalize();
    double prev = 0.0;
    for (int it = 1; it <= max_iter; ++it) {
        CVec w = apply(v);
        const double lam = std::real(v.dot(w));
        const double nw = w.norm();
        res.iterations = it;
        res.value = std::max(lam, 0.0);
        if (nw == 0.0) {
            res.converged = true;
            return res;
        }
        if (it > 1 && std::abs(lam - prev) <= rel_tol * std::max(std::abs(lam), 1e-300)) {
            res.converged = true;
            return res;
        }
        prev = lam;
        v = w / nw;
    }
    return res;
}

CVec project_power_ball(const CVec& x, double power) {
    const double n2 = x.squaredNorm();
    if (n2 <= power)
        return x;
    return x * (std::sqrt(power) / std::sqrt(n2));
}

CMat kron(const CMat& a, const CMat& b, long max_entries) {
    const long rows = a.rows() * b.rows();
    const long cols = a.cols() * b.cols();
    if (rows * cols > max_entries)
        throw std::length_error("kron: dense result exceeds size guard");
    CMat out(rows, cols);
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

}  // namespace isac
