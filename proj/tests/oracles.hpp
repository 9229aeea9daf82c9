#ifndef HCF_TEST_ORACLES_HPP
#define HCF_TEST_ORACLES_HPP

// Test-side reference implementations, kept independent of the library's
// computation paths: plain loops over the raw definitions, and LU-based rank
// counts where the library uses SVD thresholds.

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hcf/bracket.hpp"

namespace oracle {

using hcf::Bracket;
using hcf::cplx;
using hcf::MatC;
using hcf::VecC;

// Full antisymmetric structure-constant array mu[i][j][k].
inline std::vector<std::vector<std::vector<cplx>>> full_constants(const Bracket& mu) {
    const int n = mu.dim();
    std::vector<std::vector<std::vector<cplx>>> c(
        n, std::vector<std::vector<cplx>>(n, std::vector<cplx>(n, 0.0)));
    for (int p = 0; p < mu.pairs(); ++p) {
        auto [i, j] = mu.pair_at(p);
        for (int k = 0; k < n; ++k) {
            c[i][j][k] = mu.pair_matrix()(k, p);
            c[j][i][k] = -mu.pair_matrix()(k, p);
        }
    }
    return c;
}

// pi(A)mu from the three-term definition, componentwise.
inline Bracket brute_pi(const MatC& a, const Bracket& mu) {
    const int n = mu.dim();
    auto c = full_constants(mu);
    Bracket out(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) {
                cplx v = 0.0;
                for (int s = 0; s < n; ++s) {
                    v += a(k, s) * c[i][j][s];     // A mu(e_i, e_j)
                    v -= a(s, i) * c[s][j][k];     // mu(A e_i, e_j)
                    v -= a(s, j) * c[i][s][k];     // mu(e_i, A e_j)
                }
                out.set_entry(i, j, k, v);
            }
    return out;
}

// K_{ij} = (1/2) sum_{r<p} mu_rp^i conj(mu_rp^j), straight from the formula.
inline MatC brute_k(const Bracket& mu) {
    const int n = mu.dim();
    auto c = full_constants(mu);
    MatC k = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int r = 0; r < n; ++r)
                for (int p = r + 1; p < n; ++p)
                    k(i, j) += 0.5 * c[r][p][i] * std::conj(c[r][p][j]);
    return k;
}

inline cplx brute_inner(const Bracket& mu, const Bracket& lam) {
    const int n = mu.dim();
    auto cm = full_constants(mu);
    auto cl = full_constants(lam);
    cplx acc = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = 0; k < n; ++k) acc += cm[i][j][k] * std::conj(cl[i][j][k]);
    return acc;
}

// Dimension of Der(mu) as the kernel of the dense (P n) x (n^2) system,
// rank-counted by full-pivot LU instead of the library's SVD threshold.
inline int derivation_dim_lu(const Bracket& mu) {
    const int n = mu.dim();
    const int np = mu.pairs();
    MatC sys(static_cast<Eigen::Index>(np) * n, static_cast<Eigen::Index>(n) * n);
    for (int col = 0; col < n * n; ++col) {
        MatC e = MatC::Zero(n, n);
        e(col % n, col / n) = 1.0;
        Bracket img = brute_pi(e, mu);
        sys.col(col) =
            Eigen::Map<const VecC>(img.pair_matrix().data(), img.pair_matrix().size());
    }
    Eigen::FullPivLU<MatC> lu(sys);
    lu.setThreshold(1e-10);
    return n * n - static_cast<int>(lu.rank());
}

}  // namespace oracle

#endif
