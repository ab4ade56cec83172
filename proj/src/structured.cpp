#include "isac/structured.hpp"

namespace isac {

CVec vec(const CMat& a) { return Eigen::Map<const CVec>(a.data(), a.size()); }

CMat unvec(const CVec& v, int rows, int cols) {
    if (v.size() != static_cast<Eigen::Index>(rows) * cols)
        throw std::invalid_argument("unvec: length mismatch");
    return Eigen::Map<const CMat>(v.data(), rows, cols);
}

BlockKronOp::BlockKronOp(CMat kernel, int l) : kernel_(std::move(kernel)), l_(l) {
    require(l_ >= 1, "BlockKronOp: L must be >= 1");
}

CVec BlockKronOp::apply(const CVec& x) const {
    if (x.size() != in_dim())
        throw std::invalid_argument("BlockKronOp::apply: dimension mismatch");
    const int c = static_cast<int>(kernel_.cols());
    return vec(kernel_ * unvec(x, c, l_));
}

CVec BlockKronOp::adjoint(const CVec& y) const {
    if (y.size() != out_dim())
        throw std::invalid_argument("BlockKronOp::adjoint: dimension mismatch");
    const int r = static_cast<int>(kernel_.rows());
    return vec(kernel_.adjoint() * unvec(y, r, l_));
}

CMat BlockKronOp::dense(long max_entries) const {
    const long entries = static_cast<long>(out_dim()) * in_dim();
    if (entries > max_entries)
        throw std::length_error("BlockKronOp::dense: exceeds size guard");
    CMat d = CMat::Zero(out_dim(), in_dim());
    for (int b = 0; b < l_; ++b)
        d.block(b * kernel_.rows(), b * kernel_.cols(), kernel_.rows(), kernel_.cols()) = kernel_;
    return d;
}

CVec xtilde_apply(const CMat& x, const CVec& a, int n_r) {
    const int n_t = static_cast<int>(x.rows());
    return vec(unvec(a, n_r, n_t) * x);
}

CVec xtilde_adjoint(const CMat& x, const CVec& r, int n_r) {
    const int l = static_cast<int>(x.cols());
    return vec(unvec(r, n_r, l) * x.adjoint());
}

CMat xtilde_left(const CMat& x, const CMat& b, int n_r) {
    const int n_t = static_cast<int>(x.rows());
    const int l = static_cast<int>(x.cols());
    if (b.rows() != static_cast<Eigen::Index>(n_r) * n_t)
        throw std::invalid_argument("xtilde_left: dimension mismatch");
    // Row (l, r) of X~ B is sum_t X(t, l) * row (t, r) of B.
    CMat out = CMat::Zero(static_cast<Eigen::Index>(n_r) * l, b.cols());
    for (int li = 0; li < l; ++li)
        for (int t = 0; t < n_t; ++t) {
            const cd w = x(t, li);
            if (w == cd(0.0))
                continue;
            out.middleRows(li * n_r, n_r) += w * b.middleRows(t * n_r, n_r);
        }
    return out;
}

CMat xtilde_sandwich(const CMat& x, const CMat& c, int n_r) {
    CMat xc = xtilde_left(x, c, n_r);                 // X~ C
    CMat out = xtilde_left(x, xc.adjoint(), n_r);     // X~ (X~ C)^H = X~ C X~^H
    return 0.5 * (out + out.adjoint());
}

CMat xtilde_dense(const CMat& x, int n_r, long max_entries) {
    const long rows = static_cast<long>(n_r) * x.cols();
    const long cols = static_cast<long>(n_r) * x.rows();
    if (rows * cols > max_entries)
        throw std::length_error("xtilde_dense: exceeds size guard");
    CMat d = CMat::Zero(rows, cols);
    for (Eigen::Index l = 0; l < x.cols(); ++l)
        for (Eigen::Index t = 0; t < x.rows(); ++t)
            for (int r = 0; r < n_r; ++r)
                d(l * n_r + r, t * n_r + r) = x(t, l);
    return d;
}

CommutationOp::CommutationOp(int m, int n) : m_(m), n_(n), perm_(static_cast<size_t>(m) * n) {
    require(m >= 1 && n >= 1, "CommutationOp: dimensions must be >= 1");
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < m; ++i)
            perm_[i + j * m] = j + i * n;
}

CVec CommutationOp::apply(const CVec& v) const {
    if (v.size() != static_cast<Eigen::Index>(perm_.size()))
        throw std::invalid_argument("CommutationOp::apply: length mismatch");
    CVec out(v.size());
    for (size_t i = 0; i < perm_.size(); ++i)
        out(perm_[i]) = v(i);
    return out;
}

CVec CommutationOp::apply_transpose(const CVec& v) const {
    if (v.size() != static_cast<Eigen::Index>(perm_.size()))
        throw std::invalid_argument("CommutationOp::apply_transpose: length mismatch");
    CVec out(v.size());
    for (size_t i = 0; i < perm_.size(); ++i)
        out(i) = v(perm_[i]);
    return out;
}

TildeT::TildeT(int n_t, int n_r, int l)
    : n_t_(n_t), n_r_(n_r), l_(l),
      out_dim_(static_cast<long>(n_r) * l * n_r * n_t) {
    const CommutationOp t_tl(n_t, l);   // vec(X) -> vec(X^T)
    const CommutationOp t_rl(n_r, l);   // middle factor
    const long nr2 = static_cast<long>(n_r) * n_r;
    const long mid = static_cast<long>(n_r) * l;
    support_.reserve(static_cast<size_t>(n_t) * l * n_r);
    for (int xi = 0; xi < n_t * l; ++xi) {
        const long i = t_tl.permutation()[xi];  // position in vec(X^T)
        for (int r = 0; r < n_r; ++r) {
            // (T x) kron vec(I): entry i * n_r^2 + r * (n_r + 1)
            const long k = i * nr2 + static_cast<long>(r) * (n_r + 1);
            // I_{n_t} kron T_{n_r,L} kron I_{n_r}
            const long a = k / (mid * n_r);
            const long rem = k % (mid * n_r);
            const long b = rem / n_r;
            const long c = rem % n_r;
            const long out = a * (mid * n_r) + static_cast<long>(t_rl.permutation()[b]) * n_r + c;
            support_.emplace_back(out, xi);
        }
    }
}

CVec TildeT::apply(const CVec& x) const {
    if (x.size() != static_cast<Eigen::Index>(n_t_) * l_)
        throw std::invalid_argument("TildeT::apply: length mismatch");
    CVec out = CVec::Zero(out_dim_);
    for (const auto& [o, i] : support_)
        out(o) = x(i);
    return out;
}

CVec TildeT::apply_transpose(const CVec& y) const {
    if (y.size() != out_dim_)
        throw std::invalid_argument("TildeT::apply_transpose: length mismatch");
    CVec out = CVec::Zero(static_cast<Eigen::Index>(n_t_) * l_);
    for (const auto& [o, i] : support_)
        out(i) += y(o);
    return out;
}

CVec htilde_apply(const CMat& h, const CVec& x) {
    const int n_t = static_cast<int>(h.cols());
    if (n_t == 0 || x.size() % n_t != 0)
        throw std::invalid_argument("htilde_apply: dimension mismatch");
    const int l = static_cast<int>(x.size() / n_t);
    if (h.rows() == 0)
        return CVec(0);
    return vec(h * unvec(x, n_t, l));
}

CVec htilde_adjoint(const CMat& h, const CVec& y, int l) {
    const int k = static_cast<int>(h.rows());
    const int n_t = static_cast<int>(h.cols());
    if (y.size() != static_cast<Eigen::Index>(k) * l)
        throw std::invalid_argument("htilde_adjoint: dimension mismatch");
    if (k == 0)
        return CVec::Zero(static_cast<Eigen::Index>(n_t) * l);
    return vec(h.adjoint() * unvec(y, k, l));
}

}  // namespace isac
