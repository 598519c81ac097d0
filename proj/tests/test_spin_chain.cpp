#include <doctest.h>

#include <cmath>

#include "oracles/oracles.hpp"
#include "thermo/errors.hpp"
#include "thermo/random.hpp"
#include "thermo/spin_chain.hpp"

using namespace thermo;

namespace {

CMatrix pauli_x() {
    CMatrix m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

CMatrix pauli_z() {
    CMatrix m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

// -ZZ - (g/2)(X1 + 1X)
CMatrix tfim_bond(double g) {
    const CMatrix id = CMatrix::Identity(2, 2);
    return -kron(pauli_z(), pauli_z()) - 0.5 * g * (kron(pauli_x(), id) + kron(id, pauli_x()));
}

}  // namespace

TEST_CASE("model invariants") {
    CHECK_THROWS_AS(SpinChainModel(1, 1, CMatrix::Zero(1, 1)), InvariantError);
    CHECK_THROWS_AS(SpinChainModel(2, 0, CMatrix::Zero(1, 1)), InvariantError);
    CHECK_THROWS_AS(SpinChainModel(2, 2, CMatrix::Zero(2, 2)), DimensionMismatchError);
    CHECK_THROWS_AS(SpinChainModel(2, 1, CMatrix::Zero(2, 2), 0.0), InvariantError);
    CMatrix bad(2, 2);
    bad << 0, 1, 0, 0;
    CHECK_THROWS_AS(SpinChainModel(2, 1, bad), NotHermitianError);
    const SpinChainModel m(2, 2, tfim_bond(1.0));
    CHECK(m.translates(5).size() == 4);
    CHECK(m.with_boundary(Boundary::periodic).translates(5).size() == 5);
    CHECK(m.commutation_radius() == 2);
    CHECK(parse_boundary("periodic") == Boundary::periodic);
    CHECK_THROWS(parse_boundary("twisted"));
}

TEST_CASE("finite-volume Hamiltonian equals the index-loop oracle") {
    Rng rng(21);
    for (int d : {2, 3}) {
        for (int r : {1, 2}) {
            const CMatrix h = random_hermitian(d == 2 ? (r == 1 ? 2 : 4) : (r == 1 ? 3 : 9), rng);
            for (bool periodic : {false, true}) {
                const SpinChainModel m(d, r, h, 1.0, periodic ? Boundary::periodic : Boundary::open);
                const int n = 4;
                const CMatrix got = finite_volume_hamiltonian(m, n).matrix();
                const CMatrix ref = oracle::chain_hamiltonian(h, d, r, n, periodic);
                CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-13);
            }
        }
    }
}

TEST_CASE("pressure of brute-force small chains") {
    Rng rng(4);
    const CMatrix h = random_hermitian(4, rng);
    for (bool periodic : {false, true}) {
        const SpinChainModel m(2, 2, h, 0.7, periodic ? Boundary::periodic : Boundary::open);
        for (int n = 2; n <= 5; ++n) {
            const CMatrix hn = oracle::chain_hamiltonian(h, 2, 2, n, periodic);
            auto ev = oracle::hermitian_eigenvalues(hn);
            for (double& e : ev) e *= 0.7;
            CHECK(log_partition(m, n) == doctest::Approx(oracle::log_sum_exp_neg(ev)).epsilon(1e-13));
        }
    }
}

TEST_CASE("classical Ising chain: 2x2 transfer matrix and enumeration") {
    // h = -J Z Z is diagonal, so the automatic path skips the eigensolver.
    const double J = 1.0, beta = 0.8;
    const CMatrix h = -J * kron(pauli_z(), pauli_z());
    const SpinChainModel m(2, 2, h, beta, Boundary::periodic);
    const double lp = 2.0 * std::cosh(beta * J), lm = 2.0 * std::sinh(beta * J);
    for (int n = 2; n <= 12; ++n) {
        const double exact = std::log(std::pow(lp, n) + std::pow(lm, n));
        CHECK(log_partition(m, n) == doctest::Approx(exact).epsilon(1e-13));
        if (n <= 8) CHECK(log_partition(m, n, {}, SpectralPath::dense) == doctest::Approx(exact).epsilon(1e-13));
    }
    const std::vector<std::vector<double>> phi{{-J, J}, {J, -J}};
    const std::vector<std::vector<int>> all{{1, 1}, {1, 1}};
    const SpinChainModel open = m.with_boundary(Boundary::open);
    for (int n = 2; n <= 10; ++n) {
        CHECK(log_partition(open, n) == doctest::Approx(oracle::classical_log_z(phi, all, n, false, beta)).epsilon(1e-13));
    }
}

TEST_CASE("transverse-field Ising against frozen numpy values") {
    const SpinChainModel m(2, 2, tfim_bond(1.0), 1.0, Boundary::periodic);
    struct Row {
        int n;
        double beta;
        double log_z;
    };
    // scripts/freeze_reference_values.py
    const Row rows[] = {{8, 0.5, 7.3405162894321219},  {8, 1.0, 11.356774621880835}, {8, 2.0, 21.091634448719258},
                        {10, 0.5, 9.1743236936476027}, {10, 1.0, 14.167495147609392}, {10, 2.0, 26.261290562220864}};
    for (const auto& row : rows) {
        CHECK(log_partition(m.with_beta(row.beta), row.n) == doctest::Approx(row.log_z).epsilon(1e-13));
    }
    CHECK(log_partition(m.with_boundary(Boundary::open), 10) == doctest::Approx(13.323698515313732).epsilon(1e-13));
}

TEST_CASE("zero interaction gives log d on every volume") {
    for (int d : {2, 3}) {
        for (Boundary b : {Boundary::open, Boundary::periodic}) {
            const SpinChainModel m(d, 1, CMatrix::Zero(d, d), 1.0, b);
            for (const auto& pt : pressure_sequence(m, 1, 6)) {
                CHECK(std::abs(pt.p_n - std::log(static_cast<double>(d))) < 1e-12);
            }
        }
    }
}

TEST_CASE("gapped estimator: factorized equals unfactorized") {
    Rng rng(9);
    const SpinChainModel m(2, 2, random_hermitian(4, rng));
    for (const GapSchedule s : {GapSchedule{4, 2, 2}, GapSchedule{3, 2, 3}, GapSchedule{5, 2, 2}}) {
        CHECK(gapped_pressure(m, s) == doctest::Approx(gapped_pressure_unfactorized(m, s)).epsilon(1e-12));
    }
    CHECK(gapped_offsets({4, 2, 2}) == std::vector<int>{0, 1, 2, 4, 5, 6});
    CHECK_THROWS_AS(gapped_pressure(m, {4, 1, 2}), InvariantError);
    CHECK_THROWS_AS(gapped_pressure(m, {2, 2, 2}), InvariantError);
}

TEST_CASE("gapped estimator on the Ising chain stays within the gap bound") {
    const SpinChainModel m(2, 2, -kron(pauli_z(), pauli_z()), 1.0, Boundary::open);
    const double exact = std::log(2.0 * std::cosh(1.0));
    const double est = pressure_estimate(m, 10).value;
    for (int k : {4, 6, 8}) {
        const double g = gapped_pressure(m, {k, 2, 3});
        CHECK(std::abs(g - exact) <= 2.0 * m.beta() * m.interaction_norm() / k);
        CHECK(std::abs(g - est) <= 2.0 * m.beta() * m.interaction_norm() / k + std::abs(est - exact));
    }
}

TEST_CASE("pressure estimate converges on the Ising chain") {
    const SpinChainModel m(2, 2, -kron(pauli_z(), pauli_z()), 1.0, Boundary::open);
    const auto est = pressure_estimate(m, 10);
    // Open Ising: log Z_n = log 2 + (n-1) log(2 cosh 1), so the difference is exact.
    CHECK(est.value == doctest::Approx(std::log(2.0 * std::cosh(1.0))).epsilon(1e-13));
    CHECK(est.error_bar > 0.0);
}

TEST_CASE("pressure properties on random pairs") {
    Rng rng(31);
    for (int seed = 0; seed < 3; ++seed) {
        const SpinChainModel h(2, 2, random_hermitian(4, rng), 1.0);
        const SpinChainModel k = h.with_interaction(random_hermitian(4, rng, 0.5));
        for (Boundary b : {Boundary::open, Boundary::periodic}) {
            const Report rep = check_pressure_properties(h.with_boundary(b), k.with_boundary(b), 0.37, 2, 8);
            for (const auto& r : rep.records) {
                INFO(r.id, " value=", r.value, " tol=", r.tolerance);
                CHECK(r.pass);
            }
            CHECK(rep.find("ii") != nullptr);
            CHECK(rep.find("vi") != nullptr);
        }
    }
    // Given pair ordered H <= K: monotonicity recorded on it directly.
    const SpinChainModel h(2, 1, pauli_z());
    const SpinChainModel k = h.with_interaction(pauli_z() + 2.0 * CMatrix::Identity(2, 2));
    const Report rep = check_pressure_properties(h, k, 0.0, 2, 4);
    REQUIRE(rep.find("i") != nullptr);
    CHECK(rep.find("i")->value == doctest::Approx(-2.0));
}

TEST_CASE("block model and coboundary") {
    const SpinChainModel m(2, 2, tfim_bond(0.5), 1.0, Boundary::periodic);
    const SpinChainModel b = block_model(m, 2);
    CHECK(b.site_dim() == 4);
    CHECK(b.range() == 2);
    // Periodic: the block chain carries exactly the same translates.
    CHECK(log_partition(b, 4) == doctest::Approx(log_partition(m, 8)).epsilon(1e-13));
    const AlgebraElement cob = coboundary_hamiltonian(m, 6);
    CHECK(cob.matrix().cwiseAbs().maxCoeff() < 1e-13);
    const AlgebraElement cob_open = coboundary_hamiltonian(m.with_boundary(Boundary::open), 6);
    CHECK(op_norm(cob_open) <= 2.0 * m.interaction_norm() + 1e-12);
}

TEST_CASE("convexity probe and tensor additivity") {
    Rng rng(12);
    const SpinChainModel h1(2, 2, random_hermitian(4, rng));
    const SpinChainModel h2 = h1.with_interaction(random_hermitian(4, rng));
    std::vector<double> grid;
    for (int i = 0; i <= 10; ++i) grid.push_back(i / 10.0);
    const auto probe = convexity_probe(h1, h2, grid, 6);
    CHECK(probe.samples.size() == 11);
    CHECK(probe.report.records.size() == 9);
    CHECK(probe.report.passed());
    const std::vector<double> bad{0.0, 0.5, 0.5, 1.0};
    CHECK_THROWS_AS(convexity_probe(h1, h2, bad, 4), InvariantError);

    const SpinChainModel a(2, 1, random_hermitian(2, rng));
    const SpinChainModel c(3, 1, random_hermitian(3, rng));
    CHECK(tensor_additivity_check(a, c, 4) < 1e-12);
    const SpinChainModel a2(2, 2, random_hermitian(4, rng));
    const SpinChainModel c2(2, 2, random_hermitian(4, rng));
    CHECK(tensor_additivity_check(a2, c2, 3) < 1e-12);
}

TEST_CASE("budget guards large volumes") {
    const SpinChainModel m(2, 2, tfim_bond(1.0));
    Budget tiny;
    tiny.max_rows = 64;
    CHECK_THROWS_AS(log_partition(m, 7, tiny), BudgetExceededError);
    Budget small_mem;
    small_mem.memory_bytes = 1 << 16;
    CHECK_THROWS_AS(log_partition(m, 8, small_mem), BudgetExceededError);
}
