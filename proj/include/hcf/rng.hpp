#ifndef HCF_RNG_HPP
#define HCF_RNG_HPP

//
// Seeded pseudo-random inputs for property suites and the CLI sampling
// commands. No ambient entropy: every stream starts from an explicit seed.
//

#include <random>

#include "hcf/algebra.hpp"
#include "hcf/bracket.hpp"

namespace hcf {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double gauss() { return normal_(gen_); }
    cplx cgauss() { return cplx(normal_(gen_), normal_(gen_)); }
    int uniform_int(int lo, int hi) {  // inclusive
        return std::uniform_int_distribution<int>(lo, hi)(gen_);
    }

    MatC complex_matrix(int rows, int cols) {
        MatC m(rows, cols);
        for (int j = 0; j < cols; ++j)
            for (int i = 0; i < rows; ++i) m(i, j) = cgauss();
        return m;
    }

    MatC hermitian(int n) {
        MatC a = complex_matrix(n, n);
        return 0.5 * (a + a.adjoint()).eval();
    }

    // Haar-ish unitary via QR with positive diagonal phase fix.
    MatC unitary(int n) {
        MatC a = complex_matrix(n, n);
        Eigen::HouseholderQR<MatC> qr(a);
        MatC q = qr.householderQ();
        MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
        for (int i = 0; i < n; ++i) {
            cplx d = r(i, i);
            q.col(i) *= (d == cplx(0.0) ? cplx(1.0) : d / std::abs(d));
        }
        return q;
    }

    std::mt19937_64& engine() { return gen_; }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

// Random 2-step nilpotent bracket: generators are bracketed into a designated
// center block, then the whole algebra is stirred by a random unitary so
// nothing stays axis-aligned. Jacobi holds exactly by construction.
inline Bracket random_two_step(Rng& rng, int max_dim = 6) {
    const int n = rng.uniform_int(3, max_dim);
    const int gens = rng.uniform_int(2, n - 1);
    Bracket mu(n);
    for (int i = 0; i < gens; ++i)
        for (int j = i + 1; j < gens; ++j)
            for (int k = gens; k < n; ++k)
                mu.set_entry(i, j, k, rng.cgauss());
    return act(rng.unitary(n), mu);
}

// Same construction at a fixed dimension and generator count.
inline Bracket random_two_step_gens(Rng& rng, int n, int gens) {
    Bracket mu(n);
    for (int i = 0; i < gens; ++i)
        for (int j = i + 1; j < gens; ++j)
            for (int k = gens; k < n; ++k)
                mu.set_entry(i, j, k, rng.cgauss());
    return act(rng.unitary(n), mu);
}

// Same construction at a fixed dimension.
inline Bracket random_two_step_dim(Rng& rng, int n) {
    const int gens = rng.uniform_int(2, n - 1);
    Bracket mu(n);
    for (int i = 0; i < gens; ++i)
        for (int j = i + 1; j < gens; ++j)
            for (int k = gens; k < n; ++k)
                mu.set_entry(i, j, k, rng.cgauss());
    return act(rng.unitary(n), mu);
}

inline Bracket random_two_step_unit(Rng& rng, int max_dim = 6) {
    Bracket mu = random_two_step(rng, max_dim);
    while (mu.norm() < 1e-8) mu = random_two_step(rng, max_dim);
    mu *= 1.0 / mu.norm();
    return mu;
}

// Random Hermitian E supported on the center block of a validated algebra:
// E z-perp = 0, E z in z.
inline MatC random_center_supported(Rng& rng, const Algebra& alg) {
    const MatC p = alg.center_projector();
    return (p * rng.hermitian(alg.dim()) * p).eval();
}

}  // namespace hcf

#endif
