#ifndef HCF_BRACKET_HPP
#define HCF_BRACKET_HPP

//
// Complex Lie brackets as structure-constant tensors.
//
// A bracket mu on C^n is stored as the n x P matrix whose column p holds
// mu(e_i, e_j) for the p-th lexicographic pair (i,j), i < j; antisymmetry is
// structural (only i < j is stored) and complex bilinearity is automatic
// because entries are complex scalars over a complex basis.
//
// Inner products on bracket space sum over unordered pairs:
//     <mu, lam> = sum_{i<j,k} mu_ij^k * conj(lam_ij^k)
// which makes the pair matrix's Frobenius pairing the canonical one.
//

#include <cmath>
#include <utility>
#include <vector>

#include "hcf/types.hpp"

namespace hcf {

class Bracket {
public:
    static int pair_count(int dim) { return dim * (dim - 1) / 2; }

    explicit Bracket(int dim) : dim_(dim), pairs_(MatC::Zero(dim, pair_count(dim))) {
        if (dim < 1) throw ValidationError("bad_parameter", "bracket dimension must be >= 1");
    }

    Bracket(int dim, MatC pair_matrix) : dim_(dim), pairs_(std::move(pair_matrix)) {
        if (pairs_.rows() != dim_ || pairs_.cols() != pair_count(dim_))
            throw ValidationError("dimension_mismatch", "pair matrix shape does not match dimension");
    }

    int dim() const { return dim_; }
    int pairs() const { return static_cast<int>(pairs_.cols()); }

    // Lexicographic index of the pair (i,j), 0-based, i < j.
    int pair_index(int i, int j) const {
        return i * dim_ - i * (i + 1) / 2 + (j - i - 1);
    }

    std::pair<int, int> pair_at(int p) const {
        int i = 0;
        int row = dim_ - 1;
        while (p >= row) { p -= row; --row; ++i; }
        return {i, i + 1 + p};
    }

    // Structure constant mu_ij^k with the antisymmetric extension (any i != j).
    cplx entry(int i, int j, int k) const {
        if (i == j) return 0.0;
        return i < j ? pairs_(k, pair_index(i, j)) : -pairs_(k, pair_index(j, i));
    }

    void set_entry(int i, int j, int k, cplx v) {
        if (!(0 <= i && i < j && j < dim_ && 0 <= k && k < dim_))
            throw ValidationError("dimension_mismatch", "set_entry requires 0 <= i < j < dim and k in range");
        pairs_(k, pair_index(i, j)) = v;
    }

    const MatC& pair_matrix() const { return pairs_; }
    MatC& pair_matrix() { return pairs_; }

    // mu(e_a, e_b) as a vector, signed for a > b.
    VecC column(int a, int b) const {
        if (a == b) return VecC::Zero(dim_);
        return a < b ? VecC(pairs_.col(pair_index(a, b))) : VecC(-pairs_.col(pair_index(b, a)));
    }

    // mu(X, Y) for arbitrary vectors.
    VecC eval(const VecC& x, const VecC& y) const {
        if (x.size() != dim_ || y.size() != dim_)
            throw ValidationError("dimension_mismatch", "eval arguments must have the bracket's dimension");
        VecC out = VecC::Zero(dim_);
        for (int p = 0; p < pairs(); ++p) {
            auto [i, j] = pair_at(p);
            cplx w = x(i) * y(j) - x(j) * y(i);
            if (w != 0.0) out += w * pairs_.col(p);
        }
        return out;
    }

    // mu(u, e_b) for a vector u on the first leg.
    VecC eval_left(const VecC& u, int b) const {
        VecC out = VecC::Zero(dim_);
        for (int a = 0; a < dim_; ++a) {
            if (a == b || u(a) == 0.0) continue;
            out += u(a) * column(a, b);
        }
        return out;
    }

    bool finite() const { return pairs_.allFinite(); }

    double norm_sq() const { return pairs_.squaredNorm(); }
    double norm() const { return pairs_.norm(); }

    Bracket& operator+=(const Bracket& o) { pairs_ += o.pairs_; return *this; }
    Bracket& operator*=(cplx c) { pairs_ *= c; return *this; }

    friend Bracket operator+(Bracket a, const Bracket& b) { a += b; return a; }
    friend Bracket operator*(cplx c, Bracket m) { m *= c; return m; }

private:
    int dim_;
    MatC pairs_;
};

// <mu, lam> over unordered pairs; Hermitian, linear in the first slot.
inline cplx bracket_inner(const Bracket& mu, const Bracket& lam) {
    if (mu.dim() != lam.dim())
        throw ValidationError("dimension_mismatch", "bracket_inner requires equal dimensions");
    return (lam.pair_matrix().conjugate().cwiseProduct(mu.pair_matrix())).sum();
}

// Frobenius pairing <A, B> = tr(A B^H) on endomorphisms.
inline cplx endo_inner(const MatC& a, const MatC& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw ValidationError("dimension_mismatch", "endo_inner requires equal shapes");
    return (b.conjugate().cwiseProduct(a)).sum();
}

// Induced map on pairs: (Lambda^2 psi)_{(ab),(ij)} = psi_ai psi_bj - psi_bi psi_aj.
inline MatC lambda2(const MatC& psi) {
    const int n = static_cast<int>(psi.rows());
    const int np = Bracket::pair_count(n);
    Bracket idx(n);  // for pair bookkeeping only
    MatC out(np, np);
    for (int q = 0; q < np; ++q) {
        auto [i, j] = idx.pair_at(q);
        for (int p = 0; p < np; ++p) {
            auto [a, b] = idx.pair_at(p);
            out(p, q) = psi(a, i) * psi(b, j) - psi(b, i) * psi(a, j);
        }
    }
    return out;
}

// Basis-change action phi . mu = phi mu(phi^-1 ., phi^-1 .).
// Refuses maps with condition number above tol::condition.
inline Bracket act(const MatC& phi, const Bracket& mu) {
    const int n = mu.dim();
    if (phi.rows() != n || phi.cols() != n)
        throw ValidationError("dimension_mismatch", "act requires an n x n map");
    Eigen::JacobiSVD<MatC> svd(phi);
    const double smax = svd.singularValues()(0);
    const double smin = svd.singularValues()(n - 1);
    if (!(smin > 0) || smax / smin > tol::condition)
        throw ValidationError("singular_matrix",
                              "act: map is singular or has condition number above 1e12");
    MatC psi = phi.partialPivLu().solve(MatC::Identity(n, n));
    return Bracket(n, phi * mu.pair_matrix() * lambda2(psi));
}

// Infinitesimal action pi(A)mu = A mu(.,.) - mu(A.,.) - mu(.,A.).
// Kernel in A = Der(mu); satisfies pi([A,B]) = [pi(A), pi(B)].
inline Bracket pi_action(const MatC& a, const Bracket& mu) {
    const int n = mu.dim();
    if (a.rows() != n || a.cols() != n)
        throw ValidationError("dimension_mismatch", "pi_action requires an n x n map");
    MatC out(n, mu.pairs());
    for (int p = 0; p < mu.pairs(); ++p) {
        auto [i, j] = mu.pair_at(p);
        VecC w = a * mu.pair_matrix().col(p);
        w -= mu.eval_left(a.col(i), j);
        w += mu.eval_left(a.col(j), i);  // -mu(e_i, A e_j) = +mu(A e_j, e_i)
        out.col(p) = w;
    }
    return Bracket(n, std::move(out));
}

// Max Jacobiator norm over basis triples, relative to |mu|^2 (the residual is
// quadratic in mu). Zero bracket reports 0.
inline double jacobi_residual(const Bracket& mu) {
    const int n = mu.dim();
    const double nsq = mu.norm_sq();
    if (nsq == 0.0) return 0.0;
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) {
                VecC jac = mu.eval_left(mu.column(i, j), l)
                         + mu.eval_left(mu.column(j, l), i)
                         + mu.eval_left(mu.column(l, i), j);
                worst = std::max(worst, jac.norm());
            }
    return worst / nsq;
}

// Worst triple for error reporting.
struct JacobiWorst {
    double residual = 0.0;
    int i = 0, j = 0, l = 0;
};

inline JacobiWorst jacobi_worst_triple(const Bracket& mu) {
    const int n = mu.dim();
    const double nsq = mu.norm_sq();
    JacobiWorst w;
    if (nsq == 0.0) return w;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int l = j + 1; l < n; ++l) {
                VecC jac = mu.eval_left(mu.column(i, j), l)
                         + mu.eval_left(mu.column(j, l), i)
                         + mu.eval_left(mu.column(l, i), j);
                double r = jac.norm() / nsq;
                if (r > w.residual) w = {r, i, j, l};
            }
    return w;
}

// |mu(mu(.,.),.)| over basis arguments, relative to |mu|^2. Zero for 2-step.
inline double nilpotency_residual(const Bracket& mu) {
    const double nsq = mu.norm_sq();
    if (nsq == 0.0) return 0.0;
    double acc = 0.0;
    for (int p = 0; p < mu.pairs(); ++p)
        for (int k = 0; k < mu.dim(); ++k)
            acc += mu.eval_left(mu.pair_matrix().col(p), k).squaredNorm();
    return std::sqrt(acc) / nsq;
}

// ODE state mapping: brackets flattened column-major.
inline VecC to_state(const Bracket& mu) {
    return Eigen::Map<const VecC>(mu.pair_matrix().data(), mu.pair_matrix().size());
}

inline Bracket from_state(int dim, const VecC& state) {
    const int np = Bracket::pair_count(dim);
    if (state.size() != static_cast<Eigen::Index>(dim) * np)
        throw ValidationError("dimension_mismatch", "state size does not match bracket dimension");
    return Bracket(dim, Eigen::Map<const MatC>(state.data(), dim, np));
}

}  // namespace hcf

#endif
