#ifndef HCF_ALGEBRA_HPP
#define HCF_ALGEBRA_HPP

//
// Validated algebra descriptors: Jacobi check, metric center/complement
// splitting, 2-step detection, and the derivation algebra Der(mu) = ker pi(.)mu.
//
// The center z = {X : mu(X,.) = 0} is the kernel of the stacked adjoint maps,
// extracted by a rank-revealing SVD; z-perp is the Euclidean-Hermitian
// orthogonal complement in the working basis, matching the g-orthogonal
// splitting for the current metric (the working frame is always unitary).
//

#include <utility>
#include <vector>

#include "hcf/bracket.hpp"
#include "hcf/types.hpp"

namespace hcf {

namespace detail {

// Columns of V matching singular values sigma <= cut * sigma_max, plus the
// orthonormal complement. M may have any row count; kernel lives in C^cols.
struct KernelSplit {
    MatC kernel;      // cols x k, orthonormal
    MatC complement;  // cols x (cols - k), orthonormal
};

inline KernelSplit kernel_split(const MatC& m, double cut = tol::rank_cut) {
    Eigen::JacobiSVD<MatC> svd(m, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double smax = sv.size() > 0 ? sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cut * smax && sv(i) > 0.0) ++rank;
    const MatC& v = svd.matrixV();
    KernelSplit out;
    out.kernel = v.rightCols(v.cols() - rank);
    out.complement = v.leftCols(rank);
    return out;
}

}  // namespace detail

class Algebra {
public:
    // Validates Jacobi (throws jacobi_violation above jacobi_tol, relative to
    // |mu|^2) and computes the splitting. NotTwoStep is a flag, not an error.
    explicit Algebra(Bracket mu, double jacobi_tol = tol::jacobi) : mu_(std::move(mu)) {
        if (!mu_.finite())
            throw ValidationError("parse_error", "bracket has non-finite entries");
        auto worst = jacobi_worst_triple(mu_);
        jacobi_residual_ = worst.residual;
        if (jacobi_residual_ > jacobi_tol)
            throw ValidationError(
                "jacobi_violation",
                "Jacobi identity violated: relative residual " + std::to_string(worst.residual) +
                    " at basis triple (" + std::to_string(worst.i + 1) + "," +
                    std::to_string(worst.j + 1) + "," + std::to_string(worst.l + 1) + ")");
        compute_center();
    }

    const Bracket& bracket() const { return mu_; }
    int dim() const { return mu_.dim(); }

    // Orthonormal basis of the center z (n x dim_z).
    const MatC& center_basis() const { return center_; }
    // Orthonormal basis of z-perp (n x (n - dim_z)).
    const MatC& complement_basis() const { return complement_; }
    int center_dim() const { return static_cast<int>(center_.cols()); }

    bool is_two_step() const { return two_step_; }
    double jacobi_residual() const { return jacobi_residual_; }

    // Orthogonal projector onto the center.
    MatC center_projector() const { return center_ * center_.adjoint(); }

    // Frobenius-orthonormal basis of Der(mu) = ker(D -> pi(D)mu), by
    // singular-value thresholding. Abelian brackets return all of End.
    // Recomputed per call; descriptors hold no mutable state.
    std::vector<MatC> derivation_basis(double cut = tol::rank_cut) const {
        const int n = dim();
        const int np = mu_.pairs();
        MatC sys(static_cast<Eigen::Index>(np) * n, static_cast<Eigen::Index>(n) * n);
        for (int col = 0; col < n * n; ++col) {
            MatC e = MatC::Zero(n, n);
            e(col % n, col / n) = 1.0;  // column-major basis of End
            Bracket image = pi_action(e, mu_);
            sys.col(col) = Eigen::Map<const VecC>(image.pair_matrix().data(),
                                                  image.pair_matrix().size());
        }
        auto split = detail::kernel_split(sys, cut);
        std::vector<MatC> basis;
        basis.reserve(split.kernel.cols());
        for (int k = 0; k < split.kernel.cols(); ++k)
            basis.push_back(Eigen::Map<const MatC>(split.kernel.col(k).data(), n, n));
        return basis;
    }

    int derivation_dim() const { return static_cast<int>(derivation_basis().size()); }

private:
    void compute_center() {
        const int n = dim();
        // Stacked adjoint maps: row block (j,k), column i holds mu_ij^k.
        MatC stacked(static_cast<Eigen::Index>(n) * n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                stacked.block(static_cast<Eigen::Index>(j) * n, i, n, 1) = mu_.column(i, j);
        auto split = detail::kernel_split(stacked);
        center_ = split.kernel;
        complement_ = split.complement;

        // 2-step iff image(mu) lies in the center (then mu(mu(.,.),.) = 0).
        const double scale = mu_.norm();
        if (scale == 0.0) { two_step_ = true; return; }
        MatC off = mu_.pair_matrix() - center_projector() * mu_.pair_matrix();
        double worst = 0.0;
        for (int p = 0; p < off.cols(); ++p)
            worst = std::max(worst, off.col(p).norm());
        two_step_ = worst <= tol::two_step * scale;
    }

    Bracket mu_;
    MatC center_;
    MatC complement_;
    bool two_step_ = false;
    double jacobi_residual_ = 0.0;
};

inline Algebra validate(Bracket mu, double jacobi_tol = tol::jacobi) {
    return Algebra(std::move(mu), jacobi_tol);
}

// Largest principal angle (radians) between the column spans of two
// orthonormal bases; 0 when they span the same subspace. Computed through the
// projection residual sin(theta) = |q2 - q1 (q1^H q2)|_2, which stays
// accurate for tiny angles where acos of a Gram singular value cannot.
inline double max_principal_angle(const MatC& q1, const MatC& q2) {
    if (q1.cols() != q2.cols()) return std::acos(-1.0) / 2;
    if (q1.cols() == 0) return 0.0;
    MatC resid = q2 - q1 * (q1.adjoint() * q2);
    Eigen::JacobiSVD<MatC> svd(resid);
    double s = std::clamp(svd.singularValues().maxCoeff(), 0.0, 1.0);
    return std::asin(s);
}

}  // namespace hcf

#endif
