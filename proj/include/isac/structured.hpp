#pragma once

// Column-stacking vec convention throughout: vec(A)[i + j*rows] = A(i, j),
// so vec(A X B) = (B^T kron A) vec(X).

#include "isac/core.hpp"

#include <vector>

namespace isac {

CVec vec(const CMat& a);
CMat unvec(const CVec& v, int rows, int cols);

/// The operator I_L kron K for an (rows x cols) kernel K, applied blockwise.
class BlockKronOp {
public:
    BlockKronOp(CMat kernel, int l);

    CVec apply(const CVec& x) const;    // vec(K X)
    CVec adjoint(const CVec& y) const;  // vec(K^H Y)
    CMat dense(long max_entries = 4096) const;

    const CMat& kernel() const { return kernel_; }
    int blocks() const { return l_; }
    int in_dim() const { return static_cast<int>(kernel_.cols()) * l_; }
    int out_dim() const { return static_cast<int>(kernel_.rows()) * l_; }

private:
    CMat kernel_;
    int l_;
};

/// X~ = X^T kron I_{n_r}: X~ a = vec(A X) with A = unvec(a, n_r, n_t).
CVec xtilde_apply(const CMat& x, const CVec& a, int n_r);
/// X~^H r = vec(R X^H) with R = unvec(r, n_r, L).
CVec xtilde_adjoint(const CMat& x, const CVec& r, int n_r);
/// X~ B for B with n_r*n_t rows.
CMat xtilde_left(const CMat& x, const CMat& b, int n_r);
/// X~ C X~^H for Hermitian C, without forming X~.
CMat xtilde_sandwich(const CMat& x, const CMat& c, int n_r);
/// Dense X~, guarded (test oracle).
CMat xtilde_dense(const CMat& x, int n_r, long max_entries = 1L << 20);

/// T_{M,N}: vec(A) -> vec(A^T) for A of size M x N, as an index permutation.
class CommutationOp {
public:
    CommutationOp(int m, int n);

    CVec apply(const CVec& v) const;
    CVec apply_transpose(const CVec& v) const;  // T^T = T_{N,M}
    const std::vector<int>& permutation() const { return perm_; }
    int m() const { return m_; }
    int n() const { return n_; }

private:
    int m_, n_;
    std::vector<int> perm_;  // out[perm_[i]] = v[i]
};

/// Selection map T~ with vec(X~) = T~ vec(X), built by composing
/// (I_{n_t} kron T_{n_r,L} kron I_{n_r}) (T_{n_t,L} kron vec(I_{n_r})) as index maps.
class TildeT {
public:
    TildeT(int n_t, int n_r, int l);

    CVec apply(const CVec& x) const;            // length (n_r L)(n_r n_t)
    CVec apply_transpose(const CVec& y) const;  // length n_t L
    /// For each entry of vec(X~) that is structurally nonzero: (index in vec(X~), index in x).
    const std::vector<std::pair<long, int>>& support() const { return support_; }
    long out_dim() const { return out_dim_; }

private:
    int n_t_, n_r_, l_;
    long out_dim_;
    std::vector<std::pair<long, int>> support_;
};

/// H~ = I_L kron H.
CVec htilde_apply(const CMat& h, const CVec& x);
CVec htilde_adjoint(const CMat& h, const CVec& y, int l);

}  // namespace isac
