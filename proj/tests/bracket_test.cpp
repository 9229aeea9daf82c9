#include <gtest/gtest.h>

#include <unsupported/Eigen/MatrixFunctions>

#include "hcf/algebra.hpp"
#include "hcf/bracket.hpp"
#include "hcf/catalog.hpp"
#include "hcf/rng.hpp"
#include "oracles.hpp"

using namespace hcf;

namespace {

MatC diag3(cplx a, cplx b, cplx c) {
    MatC m = MatC::Zero(3, 3);
    m(0, 0) = a;
    m(1, 1) = b;
    m(2, 2) = c;
    return m;
}

}  // namespace

TEST(Validate, HeisenbergCenterAndTwoStep) {
    Algebra alg = catalog::heisenberg3(1.0);
    EXPECT_TRUE(alg.is_two_step());
    EXPECT_EQ(alg.center_dim(), 1);
    // center = span(Z3)
    VecC z = alg.center_basis().col(0);
    EXPECT_NEAR(std::abs(z(2)), 1.0, 1e-12);
    EXPECT_NEAR(std::abs(z(0)), 0.0, 1e-12);
    EXPECT_NEAR(std::abs(z(1)), 0.0, 1e-12);
    EXPECT_LE(alg.jacobi_residual(), 1e-14);
}

TEST(Validate, AbelianIsVacuouslyTwoStep) {
    Algebra alg = catalog::abelian(3);
    EXPECT_TRUE(alg.is_two_step());
    EXPECT_EQ(alg.center_dim(), 3);
}

TEST(Validate, NonNilpotentSolvableExample) {
    // mu(Z1, Z2) = Z2: Jacobi holds vacuously at n = 2 but the algebra is not
    // 2-step, since mu(mu(Z1,Z2),Z1) = -Z2 != 0.
    Bracket mu(2);
    mu.set_entry(0, 1, 1, 1.0);
    Algebra alg = validate(mu);
    EXPECT_FALSE(alg.is_two_step());
    EXPECT_EQ(alg.center_dim(), 0);
    VecC e1 = VecC::Zero(2), e2 = VecC::Zero(2);
    e1(0) = 1.0;
    e2(1) = 1.0;
    VecC nested = mu.eval(mu.eval(e1, e2), e1);
    EXPECT_NEAR(std::abs(nested(1) + 1.0), 0.0, 1e-15);
}

TEST(Validate, JacobiViolationIsRejected) {
    Bracket mu(3);
    mu.set_entry(0, 1, 2, 1.0);
    mu.set_entry(1, 2, 0, 1.0);
    mu.set_entry(0, 2, 0, 1.0);  // spoils Jacobi
    EXPECT_GT(jacobi_residual(mu), 1e-3);
    try {
        validate(mu);
        FAIL() << "expected jacobi_violation";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.code(), "jacobi_violation");
    }
}

TEST(Act, ScalarBidegree) {
    Rng rng(11);
    Bracket mu = random_two_step(rng);
    const cplx c(1.3, -0.4);
    Bracket lhs = act(c * MatC::Identity(mu.dim(), mu.dim()), mu);
    Bracket rhs = (1.0 / c) * mu;
    EXPECT_LE((lhs.pair_matrix() - rhs.pair_matrix()).norm(), 1e-12 * mu.norm());
}

TEST(Act, HeisenbergCenterScaling) {
    Algebra alg = catalog::heisenberg3(1.0);
    const cplx s(2.0, 1.0);
    Bracket moved = act(diag3(1, 1, s), alg.bracket());
    EXPECT_NEAR(std::abs(moved.entry(0, 1, 2) - s), 0.0, 1e-14);
}

TEST(Act, CompositionProperty) {
    Rng rng(12);
    Bracket mu = random_two_step(rng);
    const int n = mu.dim();
    MatC phi = MatC::Identity(n, n) + 0.3 * rng.complex_matrix(n, n);
    MatC psi = MatC::Identity(n, n) + 0.3 * rng.complex_matrix(n, n);
    Bracket lhs = act((phi * psi).eval(), mu);
    Bracket rhs = act(phi, act(psi, mu));
    EXPECT_LE((lhs.pair_matrix() - rhs.pair_matrix()).norm(), 1e-10 * std::max(1.0, lhs.norm()));
}

TEST(Act, SingularMapRejected) {
    Bracket mu = catalog::heisenberg3(1.0).bracket();
    MatC phi = MatC::Zero(3, 3);
    phi(0, 0) = 1.0;
    phi(1, 1) = 1.0;  // rank 2
    try {
        act(phi, mu);
        FAIL() << "expected singular_matrix";
    } catch (const ValidationError& e) {
        EXPECT_EQ(e.code(), "singular_matrix");
    }
}

TEST(Pi, IdentityActsAsMinusOne) {
    Rng rng(13);
    Bracket mu = random_two_step(rng);
    Bracket out = pi_action(MatC::Identity(mu.dim(), mu.dim()), mu);
    EXPECT_LE((out.pair_matrix() + mu.pair_matrix()).norm(), 1e-14 * mu.norm());
}

TEST(Pi, HeisenbergDiagonalDirections) {
    Bracket mu = catalog::heisenberg3(1.0).bracket();
    Bracket center_dir = pi_action(diag3(0, 0, 1), mu);
    EXPECT_LE((center_dir.pair_matrix() - mu.pair_matrix()).norm(), 1e-15);
    Bracket gen_dir = pi_action(diag3(1, 0, 0), mu);
    EXPECT_LE((gen_dir.pair_matrix() + mu.pair_matrix()).norm(), 1e-15);
}

TEST(Pi, MatchesBruteForceDefinition) {
    Rng rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        Bracket mu = random_two_step(rng);
        MatC a = rng.complex_matrix(mu.dim(), mu.dim());
        Bracket lib = pi_action(a, mu);
        Bracket ref = oracle::brute_pi(a, mu);
        EXPECT_LE((lib.pair_matrix() - ref.pair_matrix()).norm(), 1e-12 * (1.0 + ref.norm()));
    }
}

TEST(Pi, LieAlgebraMorphism) {
    Rng rng(15);
    for (int trial = 0; trial < 20; ++trial) {
        Bracket mu = random_two_step(rng);
        const int n = mu.dim();
        MatC a = rng.complex_matrix(n, n);
        MatC b = rng.complex_matrix(n, n);
        Bracket lhs = pi_action((a * b - b * a).eval(), mu);
        Bracket rhs = pi_action(a, pi_action(b, mu)) + (-1.0) * pi_action(b, pi_action(a, mu));
        double scale = std::max(1.0, lhs.norm());
        EXPECT_LE((lhs.pair_matrix() - rhs.pair_matrix()).norm(), 1e-9 * scale);
    }
}

TEST(Pi, AdjointCompatibility) {
    Rng rng(16);
    for (int trial = 0; trial < 20; ++trial) {
        Bracket mu = random_two_step(rng);
        Bracket lam = random_two_step_dim(rng, mu.dim());
        MatC a = rng.complex_matrix(mu.dim(), mu.dim());
        cplx lhs = bracket_inner(pi_action(a, mu), lam);
        cplx rhs = bracket_inner(mu, pi_action(a.adjoint().eval(), lam));
        EXPECT_LE(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(lhs)));
    }
}

TEST(Pi, GeneratesTheActionInFirstOrder) {
    Rng rng(17);
    Bracket mu = random_two_step(rng);
    const int n = mu.dim();
    MatC a = rng.complex_matrix(n, n);
    const double h = 1e-5;
    MatC ep = (h * a).exp();
    MatC em = (-h * a).exp();
    Bracket diff = act(ep, mu) + (-1.0) * act(em, mu);
    diff *= 1.0 / (2.0 * h);
    Bracket expected = pi_action(a, mu);
    EXPECT_LE((diff.pair_matrix() - expected.pair_matrix()).norm(),
              1e-6 * std::max(1.0, expected.norm()));
}

TEST(Inner, HeisenbergSingleEntry) {
    const cplx s(1.0, -2.0);
    Bracket mu = catalog::heisenberg3(s).bracket();
    EXPECT_NEAR(std::real(bracket_inner(mu, mu)), std::norm(s), 1e-14);
    EXPECT_NEAR(std::imag(bracket_inner(mu, mu)), 0.0, 1e-16);
}

TEST(Inner, WeightedH5TwoEntries) {
    const cplx a(0.5, 0.5), b(2.0, -1.0);
    Bracket mu = catalog::weighted_h5(a, b).bracket();
    EXPECT_NEAR(mu.norm_sq(), std::norm(a) + std::norm(b), 1e-14);
}

TEST(Inner, HermitianNonnegativeAndMatchesOracle) {
    Rng rng(18);
    for (int trial = 0; trial < 10; ++trial) {
        Bracket mu = random_two_step(rng);
        Bracket lam = random_two_step_dim(rng, mu.dim());
        cplx ml = bracket_inner(mu, lam);
        cplx lm = bracket_inner(lam, mu);
        EXPECT_LE(std::abs(ml - std::conj(lm)), 1e-13 * (1.0 + std::abs(ml)));
        EXPECT_GE(std::real(bracket_inner(mu, mu)), 0.0);
        EXPECT_LE(std::abs(ml - oracle::brute_inner(mu, lam)), 1e-12 * (1.0 + std::abs(ml)));
    }
    Bracket a(3), b(4);
    EXPECT_THROW(bracket_inner(a, b), ValidationError);
}

TEST(Inner, EndoPairing) {
    EXPECT_NEAR(std::real(endo_inner(MatC::Identity(5, 5), MatC::Identity(5, 5))), 5.0, 1e-15);
    MatC d1 = MatC::Zero(3, 3), d2 = MatC::Zero(3, 3);
    d1(2, 2) = 0.5;
    d2(2, 2) = std::exp(1.0);
    EXPECT_NEAR(std::real(endo_inner(d1, d2)), std::exp(1.0) / 2, 1e-14);
    Rng rng(19);
    MatC a = rng.complex_matrix(4, 4), b = rng.complex_matrix(4, 4);
    EXPECT_LE(std::abs(endo_inner(a, b) - std::conj(endo_inner(b, a))), 1e-13);
}

TEST(Derivations, AbelianHasAllEndomorphisms) {
    Algebra alg = catalog::abelian(2);
    EXPECT_EQ(alg.derivation_dim(), 4);
}

TEST(Derivations, HeisenbergDiagonalCondition) {
    Bracket mu = catalog::heisenberg3(1.0).bracket();
    EXPECT_LE(pi_action(diag3(1, 2, 3), mu).norm(), 1e-15);   // d3 = d1 + d2
    EXPECT_GE(pi_action(diag3(1, 1, 1), mu).norm(), 0.5);     // violates it
}

TEST(Derivations, HeisenbergDimensionAgainstLuOracle) {
    Algebra alg = catalog::heisenberg3(1.0);
    const int lib = alg.derivation_dim();
    EXPECT_EQ(lib, oracle::derivation_dim_lu(alg.bracket()));
    EXPECT_EQ(lib, 6);
}

TEST(Derivations, BasisIsOrthonormalAndAnnihilates) {
    Rng rng(20);
    std::vector<Algebra> cases;
    cases.push_back(catalog::heisenberg3(1.0));
    cases.push_back(catalog::weighted_h5(1.0, 2.0));
    cases.push_back(catalog::free_two_step(3));
    for (int i = 0; i < 5; ++i) cases.push_back(Algebra(random_two_step(rng)));
    for (const Algebra& alg : cases) {
        auto basis = alg.derivation_basis();
        const double mu_norm = alg.bracket().norm();
        for (std::size_t i = 0; i < basis.size(); ++i) {
            EXPECT_LE(pi_action(basis[i], alg.bracket()).norm(),
                      1e-10 * mu_norm * basis[i].norm());
            for (std::size_t j = 0; j <= i; ++j) {
                cplx g = endo_inner(basis[i], basis[j]);
                EXPECT_NEAR(std::abs(g), i == j ? 1.0 : 0.0, 1e-10);
            }
        }
        EXPECT_EQ(static_cast<int>(basis.size()), oracle::derivation_dim_lu(alg.bracket()));
    }
}

TEST(Catalog, HeisenbergFamilies) {
    Algebra h3 = catalog::heisenberg3(1.0);
    EXPECT_NEAR(std::abs(h3.bracket().entry(0, 1, 2) - 1.0), 0.0, 1e-16);
    Algebra h5 = catalog::heisenberg(5);
    Algebra w11 = catalog::weighted_h5(1.0, 1.0);
    EXPECT_LE((h5.bracket().pair_matrix() - w11.bracket().pair_matrix()).norm(), 1e-16);
    EXPECT_THROW(catalog::heisenberg(4), ValidationError);
    EXPECT_THROW(catalog::free_two_step(0), ValidationError);
    EXPECT_THROW(catalog::abelian(0), ValidationError);
}

TEST(Catalog, WeightedH5Centers) {
    Algebra generic = catalog::weighted_h5(cplx(1, 0), cplx(0, 2));
    EXPECT_EQ(generic.center_dim(), 1);
    Algebra degenerate = catalog::weighted_h5(1.0, 0.0);
    EXPECT_EQ(degenerate.center_dim(), 3);  // span(Z3, Z4, Z5)
    MatC p = degenerate.center_projector();
    for (int k : {2, 3, 4}) EXPECT_NEAR(std::real(p(k, k)), 1.0, 1e-12);
    EXPECT_NEAR(std::real(p(0, 0)), 0.0, 1e-12);
}

TEST(Catalog, FreeTwoStepShape) {
    Algebra f3 = catalog::free_two_step(3);
    EXPECT_EQ(f3.dim(), 6);
    EXPECT_EQ(f3.center_dim(), 3);
    EXPECT_TRUE(f3.is_two_step());
    EXPECT_NEAR(f3.bracket().norm_sq(), 3.0, 1e-15);
    Algebra f4 = catalog::free_two_step(4);
    EXPECT_EQ(f4.dim(), 10);
}

TEST(Catalog, DirectSumBlocks) {
    Algebra ds = catalog::direct_sum(catalog::heisenberg3(1.0), catalog::heisenberg3(2.0));
    EXPECT_EQ(ds.dim(), 6);
    EXPECT_TRUE(ds.is_two_step());
    EXPECT_EQ(ds.center_dim(), 2);
    EXPECT_NEAR(std::abs(ds.bracket().entry(3, 4, 5) - 2.0), 0.0, 1e-16);
    EXPECT_NEAR(std::abs(ds.bracket().entry(0, 1, 2) - 1.0), 0.0, 1e-16);
}

TEST(Properties, JacobiResidualTinyAfterConstruction) {
    Rng rng(21);
    for (const auto& entry : catalog::nonabelian_roster())
        EXPECT_LE(jacobi_residual(entry.algebra.bracket()), 1e-12) << entry.name;
    for (int trial = 0; trial < 100; ++trial) {
        Bracket mu = random_two_step(rng);
        EXPECT_LE(jacobi_residual(mu), 1e-12);
        EXPECT_TRUE(Algebra(mu).is_two_step());
    }
}

TEST(Properties, CenterAndDerInvariantUnderUnitaryChange) {
    Rng rng(22);
    for (int trial = 0; trial < 5; ++trial) {
        Bracket mu = random_two_step(rng);
        const int n = mu.dim();
        MatC u = rng.unitary(n);
        Algebra before(mu);
        Algebra after(act(u, mu));
        ASSERT_EQ(before.center_dim(), after.center_dim());
        EXPECT_LE(max_principal_angle((u * before.center_basis()).eval(), after.center_basis()),
                  1e-9);
        auto der_before = before.derivation_basis();
        auto der_after = after.derivation_basis();
        ASSERT_EQ(der_before.size(), der_after.size());
        // vectorize both derivation spaces; conjugation by u maps one to the other
        const Eigen::Index m2 = static_cast<Eigen::Index>(n) * n;
        MatC qa(m2, der_before.size()), qb(m2, der_after.size());
        for (std::size_t i = 0; i < der_before.size(); ++i) {
            MatC moved = u * der_before[i] * u.adjoint();
            qa.col(i) = Eigen::Map<const VecC>(moved.data(), m2);
            qb.col(i) = Eigen::Map<const VecC>(der_after[i].data(), m2);
        }
        EXPECT_LE(max_principal_angle(qa, qb), 1e-9);
    }
}
