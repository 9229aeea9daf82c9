#ifndef HCF_CURVATURE_HPP
#define HCF_CURVATURE_HPP

//
// The curvature operator K of a left-invariant Hermitian metric on a complex
// Lie group, computed from structure constants in a unitary frame:
//
//     K = pair_weight * sum_{i<j} v_ij v_ij^H,   v_ij = mu(e_i, e_j),
//
// with pair_weight = 1/2. The sum runs over unordered pairs; this is the one
// reading under which the Heisenberg matrix diag(0,0,|s|^2/2), the trace
// identity tr K = |mu|^2/2, and the flow decay rate -4|K|^2 hold
// simultaneously. Toggle pair_weight to 1.0 for the ordered/Einstein reading.
//
// K is Hermitian PSD by construction, annihilates the orthogonal complement
// of the commutator (so the whole of z-perp in the 2-step case), and scales
// quadratically: K_{c mu} = |c|^2 K_mu.
//
// Torsion route: in a unitary frame the Chern torsion of a complex Lie group
// is T_ip^k = -mu_ip^k (all mixed brackets vanish, so the Christoffel values
// Gamma_lr^j = -mu_{l jbar}^{rbar} are identically zero), the quadratic term
// Q~ rebuilt from T equals K exactly, and the Chern-Ricci trace S vanishes
// term by term. s_tensor() keeps that computation executable.
//

#include <algorithm>
#include <utility>
#include <vector>

#include "hcf/algebra.hpp"
#include "hcf/bracket.hpp"

namespace hcf {
namespace curvature {

inline constexpr double pair_weight = 0.5;

}  // namespace curvature

struct CurvatureOperator {
    MatC matrix;            // n x n Hermitian PSD
    VecR spectrum;          // eigenvalues, ascending
    double trace = 0.0;
};

inline CurvatureOperator k_from_bracket(const Bracket& mu) {
    CurvatureOperator out;
    out.matrix = curvature::pair_weight * (mu.pair_matrix() * mu.pair_matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<MatC> es(out.matrix, Eigen::EigenvaluesOnly);
    out.spectrum = es.eigenvalues();
    out.trace = out.matrix.real().trace();
    return out;
}

// Convenience: just the operator matrix.
inline MatC k_matrix(const Bracket& mu) {
    return curvature::pair_weight * (mu.pair_matrix() * mu.pair_matrix().adjoint());
}

inline double k_norm_sq(const Bracket& mu) { return k_matrix(mu).squaredNorm(); }

struct TorsionTensor {
    int dim = 0;
    MatC components;  // n x P, column p = T(e_i, e_j) = -mu(e_i, e_j)
};

inline TorsionTensor torsion(const Bracket& mu) {
    return TorsionTensor{mu.dim(), -mu.pair_matrix()};
}

// Q~ assembled from the torsion alone, under the same pair counting as K.
inline MatC q_from_torsion(const TorsionTensor& t) {
    return curvature::pair_weight * (t.components * t.components.adjoint());
}

// The Chern-Ricci trace S_{i jbar}. Every term is a product carrying at least
// one mixed structure constant mu(Z_., Z_.bar), which vanishes identically on
// a complex Lie group; the loop keeps the four-term formula executable.
inline MatC s_tensor(const Bracket& mu) {
    const int n = mu.dim();
    auto mixed = [](int, int, int) -> cplx { return 0.0; };  // mu_{a bbar}^c
    MatC s = MatC::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int r = 0; r < n; ++r) {
                    s(i, j) += -std::conj(mixed(k, i, r)) * mixed(k, j, r)
                               + mixed(k, r, i) * std::conj(mixed(k, r, j))
                               + mixed(k, k, r) * std::conj(mixed(r, j, i))
                               - std::conj(mixed(k, k, r)) * mixed(r, i, j);
                }
    return s;
}

struct TraceChecks {
    double tr_k = 0.0;
    double half_norm_sq = 0.0;
    // |K - (trK/n) Id| / |K|, Frobenius; 0 when K = 0. Reported, never
    // thresholded here.
    double static_residual = 0.0;
};

// Relative deviation of a Hermitian operator from a multiple of the identity.
inline double static_deviation(const MatC& k) {
    const double knorm = k.norm();
    if (knorm == 0.0) return 0.0;
    const double c = k.real().trace() / k.rows();
    return (k - c * MatC::Identity(k.rows(), k.cols())).norm() / knorm;
}

inline TraceChecks trace_checks(const Bracket& mu) {
    TraceChecks out;
    MatC k = k_matrix(mu);
    out.tr_k = k.real().trace();
    out.half_norm_sq = 0.5 * mu.norm_sq();
    out.static_residual = static_deviation(k);
    return out;
}

enum class Unitarization { cholesky, eigen };

// Curvature of a metric h on a fixed bracket. h is the Gram matrix of the
// Hermitian inner product in the working frame, <u,v>_h = v^H h u.
//
// A frame change C with C^H h C = Id moves the bracket to the h-unitary frame
// (lambda = C^-1 . mu); K is computed there and pulled back. The result is
// independent of the choice of C (unitary ambiguity only), which the eigen
// path cross-checks against the default triangular factorization.
struct MetricCurvature {
    MatC op;        // K as an endomorphism in the original frame (h-self-adjoint)
    MatC tensor;    // Hermitian components K(h)(e_i, e_jbar)
    VecR spectrum;  // eigenvalues of K relative to h, ascending
    Bracket unitary_frame_bracket;  // lambda = C^-1 . mu
};

inline void require_positive_definite(const MatC& h) {
    if (!is_hermitian(h, 1e-10))
        throw ValidationError("bad_metric", "metric must be Hermitian");
    Eigen::SelfAdjointEigenSolver<MatC> es(h, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (!(lo > 1e-12 * std::max(hi, 0.0)))
        throw ValidationError("not_positive_definite", "metric is not positive definite");
}

inline MetricCurvature k_from_metric(const Bracket& mu, const MatC& h,
                                     Unitarization how = Unitarization::cholesky) {
    const int n = mu.dim();
    if (h.rows() != n || h.cols() != n)
        throw ValidationError("dimension_mismatch", "metric shape does not match bracket");
    require_positive_definite(h);

    MatC c(n, n);
    if (how == Unitarization::cholesky) {
        Eigen::LLT<MatC> llt(h);
        if (llt.info() != Eigen::Success)
            throw ValidationError("not_positive_definite", "Cholesky factorization failed");
        // h = L L^H  =>  C = L^-H
        c = llt.matrixL().adjoint().solve(MatC::Identity(n, n)).eval();
    } else {
        Eigen::SelfAdjointEigenSolver<MatC> es(h);
        c = es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal();
    }

    MatC c_inv = c.partialPivLu().solve(MatC::Identity(n, n));
    MetricCurvature out{MatC(), MatC(), VecR(), act(c_inv, mu)};
    MatC k_lambda = k_matrix(out.unitary_frame_bracket);
    out.op = c * k_lambda * c_inv;
    out.tensor = (h * out.op).transpose();
    Eigen::SelfAdjointEigenSolver<MatC> es(k_lambda, Eigen::EigenvaluesOnly);
    out.spectrum = es.eigenvalues();
    return out;
}

}  // namespace hcf

#endif
