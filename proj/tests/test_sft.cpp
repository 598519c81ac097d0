#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles/oracles.hpp"
#include "thermo/errors.hpp"
#include "thermo/random.hpp"
#include "thermo/sft.hpp"

using namespace thermo;

namespace {

Eigen::MatrixXi golden_mean() {
    Eigen::MatrixXi a(2, 2);
    a << 1, 1, 1, 0;
    return a;
}

Eigen::MatrixXi full_shift(int s) { return Eigen::MatrixXi::Ones(s, s); }

SftModel ising(double j) { return SftModel(full_shift(2), {-j, j, j, -j}); }

const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

}  // namespace

TEST_CASE("model validation") {
    Eigen::MatrixXi bad(2, 2);
    bad << 1, 2, 1, 0;
    CHECK_THROWS_AS(SftModel{bad}, InvariantError);
    Eigen::MatrixXi dead(2, 2);
    dead << 1, 0, 1, 0;
    CHECK_THROWS_AS(SftModel{dead}, InvariantError);  // zero column
    CHECK_THROWS_AS(SftModel(Eigen::MatrixXi::Ones(1, 1)), InvariantError);
    CHECK_THROWS_AS(SftModel(golden_mean(), {0.0, 1.0}), DimensionMismatchError);
    CHECK_THROWS_AS(SftModel(golden_mean(), {}, 1), InvariantError);
    CHECK_THROWS_AS(SftModel(golden_mean(), {0.0, std::nan(""), 0.0, 0.0}), InvariantError);
    Eigen::MatrixXi reducible(2, 2);
    reducible << 1, 1, 0, 1;
    const SftModel r(reducible);
    CHECK_FALSE(r.irreducible());
    CHECK_THROWS_AS(r.require_irreducible(), InvariantError);
}

TEST_CASE("irreducibility and period") {
    CHECK(is_irreducible(golden_mean()));
    CHECK(cyclicity_index(golden_mean()) == 1);
    Eigen::MatrixXi cycle3(3, 3);
    cycle3 << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    CHECK(cyclicity_index(cycle3) == 3);
    Eigen::MatrixXi bip(4, 4);
    bip << 0, 1, 0, 1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1, 0;
    CHECK(cyclicity_index(bip) == 2);
}

TEST_CASE("word indexing round trips") {
    const Word w{2, 0, 1};
    CHECK(word_index(w, 3) == 19);
    CHECK(word_from_index(19, 3, 3) == w);
}

TEST_CASE("closed-form pressures") {
    CHECK(classical_pressure(SftModel(golden_mean()), 1.0) == doctest::Approx(std::log(kGolden)).epsilon(1e-14));
    for (double beta : {0.3, 1.0, 2.5}) {
        CHECK(classical_pressure(ising(1.0), beta) == doctest::Approx(std::log(2.0 * std::cosh(beta))).epsilon(1e-14));
    }
    CHECK(classical_pressure(SftModel(full_shift(3)), 1.0) == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    // Periodic (period 3) matrix still converges.
    Eigen::MatrixXi cycle3(3, 3);
    cycle3 << 0, 1, 0, 0, 0, 1, 1, 0, 0;
    CHECK(std::abs(classical_pressure(SftModel(cycle3), 1.0)) < 1e-13);
}

TEST_CASE("RPF data against a general eigensolver") {
    Rng rng(2);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    RMatrix l(4, 4);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) l(i, j) = (i + j) % 3 == 0 ? 0.0 : u(rng);
    const RpfData d = rpf_eigendata(l);
    CHECK(d.lambda == doctest::Approx(oracle::spectral_radius(l)).epsilon(1e-13));
    CHECK((l * d.right - d.lambda * d.right).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((d.left.transpose() * l - d.lambda * d.left.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(d.left.dot(d.right) == doctest::Approx(1.0));
    CHECK(d.right.minCoeff() > 0.0);
}

TEST_CASE("higher block recoding preserves word counts and pressure") {
    // Range-3 potential on the golden mean: phi(abc) = a + 0.5 c.
    std::vector<double> phi(8);
    for (int w = 0; w < 8; ++w) phi[static_cast<std::size_t>(w)] = ((w >> 2) & 1) + 0.5 * (w & 1);
    const SftModel sft(golden_mean(), phi, 3);
    const SftModel rec = higher_block_recode(sft, 3);
    CHECK(rec.alphabet() == 3);  // allowed 2-blocks: 00, 01, 10
    CHECK(rec.labels().size() == 3);
    // Number of allowed n-words equals number of allowed (n-1)-words of the recoding.
    for (int n = 3; n <= 10; ++n) {
        std::size_t base = 0, coded = 0;
        for (double e : classical_word_energies(SftModel(golden_mean()), n, Boundary::open)) base += std::isfinite(e);
        for (double e : classical_word_energies(rec.with_potential({}), n - 1, Boundary::open)) coded += std::isfinite(e);
        CHECK(base == coded);
    }
    // Pressure through the recoding vs open-chain enumeration growth.
    const double p = classical_pressure(sft, 1.0);
    auto lz = [&](int n) {
        const auto e = classical_word_energies(sft, n, Boundary::open);
        std::vector<double> fin;
        for (double x : e)
            if (std::isfinite(x)) fin.push_back(x);
        return oracle::log_sum_exp_neg(fin);
    };
    CHECK(std::abs((lz(18) - lz(17)) - p) < 1e-8);
}

TEST_CASE("Gibbs Markov measure: Parry and Ising") {
    const MarkovMeasure parry = gibbs_markov_measure(SftModel(golden_mean()), 1.0);
    parry.validate();
    CHECK(parry.kernel(0, 0) == doctest::Approx(1.0 / kGolden).epsilon(1e-13));
    CHECK(parry.kernel(0, 1) == doctest::Approx(1.0 / (kGolden * kGolden)).epsilon(1e-13));
    CHECK(parry.kernel(1, 0) == doctest::Approx(1.0));
    CHECK(parry.stationary[0] == doctest::Approx(kGolden * kGolden / (1.0 + kGolden * kGolden)).epsilon(1e-13));
    CHECK(markov_entropy(parry) == doctest::Approx(std::log(kGolden)).epsilon(1e-13));

    const SftModel is = ising(1.0);
    const MarkovMeasure mu = gibbs_markov_measure(is, 1.0);
    const double same = std::exp(1.0) / (2.0 * std::cosh(1.0));
    CHECK(mu.kernel(0, 0) == doctest::Approx(same).epsilon(1e-13));
    CHECK(mu.kernel(1, 0) == doctest::Approx(1.0 - same).epsilon(1e-13));
    const double h = markov_entropy(mu), e = markov_energy(mu, is);
    CHECK(h - e == doctest::Approx(classical_pressure(is, 1.0)).epsilon(1e-13));
}

TEST_CASE("Parry measure maximizes entropy under feasible perturbations") {
    Rng rng(41);
    const MarkovMeasure parry = gibbs_markov_measure(SftModel(full_shift(3)), 1.0);
    std::normal_distribution<double> g(0.0, 0.05);
    for (int t = 0; t < 20; ++t) {
        MarkovMeasure q = parry;
        for (Eigen::Index i = 0; i < 3; ++i) {
            for (Eigen::Index j = 0; j < 3; ++j) q.kernel(i, j) *= std::exp(g(rng));
            q.kernel.row(i) /= q.kernel.row(i).sum();
        }
        q.stationary = stationary_distribution(q.kernel);
        q.validate();
        CHECK(markov_entropy(q) < markov_entropy(parry));
    }
}

TEST_CASE("variational objective gradient matches finite differences") {
    Rng rng(13);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<double> phi(9);
    for (double& x : phi) x = u(rng);
    Eigen::MatrixXi a(3, 3);
    a << 1, 1, 0, 1, 0, 1, 1, 1, 1;
    const SftModel sft(a, phi);
    RMatrix logits(3, 3);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) logits(i, j) = u(rng);
    const ObjectiveEval ev = variational_objective(sft, 0.8, logits);
    const double h = 1e-6;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!a(i, j)) {
                CHECK(ev.gradient(i, j) == 0.0);
                continue;
            }
            RMatrix up = logits, dn = logits;
            up(i, j) += h;
            dn(i, j) -= h;
            const double fd = (variational_objective(sft, 0.8, up).value - variational_objective(sft, 0.8, dn).value) / (2 * h);
            CHECK(ev.gradient(i, j) == doctest::Approx(fd).epsilon(1e-6));
        }
    }
}

TEST_CASE("variational optimizer recovers the RPF chain") {
    const SftModel gm(golden_mean());
    VariationalOptions opts;
    opts.parallel = false;
    const VariationalResult r = variational_optimize(gm, 1.0, 1, opts);
    CHECK(r.converged);
    CHECK(r.within_gap);
    CHECK(std::abs(r.value - std::log(kGolden)) < 1e-6);
    CHECK(r.value <= r.pressure + 1e-9);
    const MarkovMeasure parry = gibbs_markov_measure(gm, 1.0);
    CHECK((r.measure.kernel - parry.kernel).cwiseAbs().maxCoeff() < 1e-5);
    // Serial and parallel restarts pick the same kernel.
    opts.parallel = true;
    const VariationalResult rp = variational_optimize(gm, 1.0, 1, opts);
    CHECK((rp.measure.kernel - r.measure.kernel).cwiseAbs().maxCoeff() == 0.0);
    // Order 2 reaches the same value.
    const VariationalResult r2 = variational_optimize(ising(1.0), 1.0, 2, opts);
    CHECK(std::abs(r2.value - std::log(2.0 * std::cosh(1.0))) < 1e-6);
    CHECK_THROWS_AS(variational_optimize(SftModel(golden_mean(), {}, 3), 1.0, 1, opts), InvariantError);
}

TEST_CASE("diagonal bridge against word enumeration") {
    const SftModel gm(golden_mean());
    for (Boundary b : {Boundary::open, Boundary::periodic}) {
        const BridgeResult r = diagonal_bridge(gm, 1.0, 8, b);
        CHECK(r.pressure_gap <= 1e-9);
        CHECK(r.gibbs_tv <= 1e-9);
        const std::vector<std::vector<double>> zero{{0, 0}, {0, 0}};
        const std::vector<std::vector<int>> allowed{{1, 1}, {1, 0}};
        CHECK(r.classical_p * 8 == doctest::Approx(oracle::classical_log_z(zero, allowed, 8, b == Boundary::periodic, 1.0)));
    }
    const BridgeResult is = diagonal_bridge(ising(1.0), 1.0, 8, Boundary::periodic);
    const double lz = std::log(std::pow(2 * std::cosh(1.0), 8) + std::pow(2 * std::sinh(1.0), 8));
    CHECK(is.classical_p == doctest::Approx(lz / 8).epsilon(1e-13));
    CHECK(is.pressure_gap <= 1e-9);
}
