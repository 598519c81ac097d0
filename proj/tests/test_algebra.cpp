#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "thermo/algebra.hpp"
#include "thermo/errors.hpp"
#include "thermo/random.hpp"
#include "thermo/spectral.hpp"

using namespace thermo;

TEST_CASE("algebra dimension and rank") {
    const FiniteDimAlgebra a({1, 2, 3});
    CHECK(a.dimension() == 14);
    CHECK(a.rank() == 6);
    CHECK_THROWS_AS(FiniteDimAlgebra({2, 0}), InvariantError);
    CHECK_THROWS_AS(FiniteDimAlgebra(std::vector<int>{}), InvariantError);
}

TEST_CASE("canonical trace sums blocks, identity has trace equal to rank") {
    const FiniteDimAlgebra a({2, 3});
    CHECK(canonical_trace(AlgebraElement::identity(a)).real() == doctest::Approx(5.0));
    Rng rng(3);
    const CMatrix b0 = random_hermitian(2, rng), b1 = random_hermitian(3, rng);
    const AlgebraElement x(a, {b0, b1});
    CHECK(std::abs(canonical_trace(x) - (b0.trace() + b1.trace())) < 1e-14);
    CHECK_THROWS_AS(AlgebraElement(a, {b0}), DimensionMismatchError);
}

TEST_CASE("known spectrum through an orthogonal similarity") {
    // Q diag(roots) Q^T with Q a normalized Hadamard matrix.
    const std::vector<double> roots{-4.0, 1.0, 2.0, 3.0};
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(4, 4);
    q << 1, 1, 1, 1, 1, -1, 1, -1, 1, 1, -1, -1, 1, -1, -1, 1;
    q /= 2.0;  // orthogonal Hadamard
    Eigen::VectorXd r(4);
    r << -4, 1, 2, 3;
    const CMatrix h = (q * r.asDiagonal() * q.transpose()).cast<cplx>();
    const RVector ev = herm_eigenvalues(AlgebraElement(h));
    for (int i = 0; i < 4; ++i) CHECK(ev[i] == doctest::Approx(roots[static_cast<std::size_t>(i)]).epsilon(1e-13));
}

TEST_CASE("eigenvalues agree with the Jacobi oracle on random hermitian matrices") {
    Rng rng(11);
    for (int dim : {1, 2, 5, 9, 16}) {
        const CMatrix h = random_hermitian(dim, rng);
        const RVector ev = herm_eigenvalues(AlgebraElement(h));
        const auto ref = oracle::hermitian_eigenvalues(h);
        for (int i = 0; i < dim; ++i) CHECK(std::abs(ev[i] - ref[static_cast<std::size_t>(i)]) < 1e-12);
        // Real input goes through the symmetric solver.
        const CMatrix s = random_real_symmetric(dim, rng);
        const RVector es = spectral::eigenvalues(s);
        const auto rs = oracle::hermitian_eigenvalues(s);
        for (int i = 0; i < dim; ++i) CHECK(std::abs(es[i] - rs[static_cast<std::size_t>(i)]) < 1e-12);
    }
}

TEST_CASE("herm_exp matches Taylor scaling and squaring") {
    Rng rng(5);
    for (double scale : {-2.0, -0.5, 1.0}) {
        const CMatrix h = random_hermitian(6, rng);
        const CMatrix got = herm_exp(AlgebraElement(h), scale).matrix();
        const CMatrix ref = oracle::expm(scale * h);
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, ref.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("log_trace_exp is stable at large energies") {
    Eigen::VectorXd e(3);
    e << 1000.0, 1001.0, 1002.0;
    const CMatrix h = e.cast<cplx>().asDiagonal();
    const double expect = -1000.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-2.0));
    CHECK(log_trace_exp(AlgebraElement(h)) == doctest::Approx(expect).epsilon(1e-15));
    CHECK(log_sum_exp_neg(-e) == doctest::Approx(1002.0 + std::log(1.0 + std::exp(-1.0) + std::exp(-2.0))));
}

TEST_CASE("non-hermitian input is rejected, not symmetrized") {
    CMatrix m(2, 2);
    m << 1, 2, 0, 1;
    CHECK_THROWS_AS(herm_eigenvalues(AlgebraElement(m)), NotHermitianError);
    CHECK_THROWS_AS(log_trace_exp(AlgebraElement(m)), NotHermitianError);
    CMatrix near = CMatrix::Identity(2, 2);
    near(0, 1) = 1e-10;
    CHECK_FALSE(is_hermitian(near));
}

TEST_CASE("op_norm, commutator and shift") {
    CMatrix x(2, 2), z(2, 2);
    x << 0, 1, 1, 0;
    z << 1, 0, 0, -1;
    const AlgebraElement X(x), Z(z);
    CHECK(op_norm(X) == doctest::Approx(1.0));
    CHECK(op_norm(commutator(X, Z)) == doctest::Approx(2.0));
    CHECK(op_norm(X.shifted(3.0)) == doctest::Approx(4.0));
    CMatrix nilpotent(2, 2);
    nilpotent << 0, 5, 0, 0;
    CHECK(op_norm(AlgebraElement(nilpotent)) == doctest::Approx(5.0));
}

TEST_CASE("embed places an operator between identities") {
    Rng rng(2);
    const CMatrix a = random_matrix(2, rng);
    const AlgebraElement e = embed(AlgebraElement(a), {3, 2, 1, 1});
    const CMatrix id2 = CMatrix::Identity(2, 2);
    const CMatrix ref = kron(kron(id2, a), id2);
    CHECK((e.matrix() - ref).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(embed(AlgebraElement(a), {3, 2, 2, 3}), DimensionMismatchError);
    CHECK_THROWS_AS(embed(AlgebraElement(a), {3, 3, 0, 0}), DimensionMismatchError);
}
