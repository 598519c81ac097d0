#include "thermo/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/spectral.hpp"

namespace thermo {

AlgebraElement place(const LocalObservable& a, int n, int site_dim) {
    if (a.lo < 0 || a.hi >= n || a.hi < a.lo) {
        throw DimensionMismatchError("observable support [" + std::to_string(a.lo) + ", " + std::to_string(a.hi) +
                                     "] leaves the " + std::to_string(n) + "-site volume");
    }
    return embed(AlgebraElement(a.op), {n, site_dim, a.lo, a.hi});
}

namespace {

CMatrix hermitize(const CMatrix& m) {
    return 0.5 * (m + m.adjoint());
}

// Tr(x y) without forming the product.
cplx trace_product(const CMatrix& x, const CMatrix& y) {
    return (x.array() * y.transpose().array()).sum();
}

}  // namespace

GibbsState::GibbsState(SpinChainModel model, int n, double beta, AlgebraElement hamiltonian, RVector energies,
                       CMatrix basis)
    : model_(std::move(model)),
      n_(n),
      beta_(beta),
      hamiltonian_(std::move(hamiltonian)),
      energies_(std::move(energies)),
      basis_(std::move(basis)),
      log_weights_(energies_.size()),
      log_z_(0.0),
      density_(CMatrix::Identity(1, 1)) {
    if (!(beta_ >= 0.0) || !std::isfinite(beta_)) throw InvariantError("beta", "beta must be finite and >= 0");
    log_z_ = log_sum_exp_neg(beta_ * energies_);
    log_weights_ = (-beta_ * energies_).array() - log_z_;
    const RVector w = log_weights_.array().exp();
    density_ = AlgebraElement(hermitize(basis_ * w.cast<cplx>().asDiagonal() * basis_.adjoint()));
    const double tr = canonical_trace(density_).real();
    if (std::abs(tr - 1.0) > 1e-12) {
        throw InvariantError("unit_trace", "Gibbs density has trace " + std::to_string(tr));
    }
}

GibbsState gibbs_state(const SpinChainModel& model, int n, double beta, const Budget& budget) {
    AlgebraElement h = finite_volume_hamiltonian(model, n, budget);
    auto dec = spectral::decompose(h.matrix());
    return GibbsState(model, n, beta, std::move(h), std::move(dec.values), std::move(dec.vectors));
}

double von_neumann_entropy(const AlgebraElement& density) {
    const RVector p = herm_eigenvalues(density);
    double s = 0.0;
    for (Eigen::Index i = 0; i < p.size(); ++i) {
        if (p[i] > 0.0) s -= p[i] * std::log(p[i]);
    }
    return s;
}

double expectation(const AlgebraElement& density, const AlgebraElement& x) {
    return trace_product(density.matrix(), x.matrix()).real();
}

double entropy(const GibbsState& state) {
    return von_neumann_entropy(state.density());
}

double energy(const GibbsState& state) {
    return expectation(state.density(), state.hamiltonian());
}

double variational_identity_check(const GibbsState& state) {
    const double n = state.volume();
    const double p_n = state.log_z() / n;
    return std::abs(p_n - (entropy(state) / n - state.beta() * energy(state) / n));
}

double trial_free_energy(const GibbsState& state, const AlgebraElement& density) {
    const double n = state.volume();
    return von_neumann_entropy(density) / n - state.beta() * expectation(density, state.hamiltonian()) / n;
}

AlgebraElement product_density(const CMatrix& site_density, int n) {
    CMatrix out = CMatrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) out = kron(out, site_density);
    return AlgebraElement(hermitize(out));
}

// e^{beta H} amplifies rounding by about e^{2 beta ||H||}; past this the dense
// conjugation would swamp the 1e-10 scale.
constexpr double kDenseKmsLimit = 5.0;

double kms_residual(const GibbsState& state, const LocalObservable& a, const LocalObservable& b) {
    const int n = state.volume();
    const int d = state.model().site_dim();
    const CMatrix A = place(a, n, d).matrix();
    const CMatrix B = place(b, n, d).matrix();
    const RVector& e = state.energies();
    const double beta = state.beta();
    const double h_norm = e.size() ? std::max(std::abs(e[0]), std::abs(e[e.size() - 1])) : 0.0;
    const CMatrix& rho = state.density().matrix();

    if (beta * h_norm <= kDenseKmsLimit) {
        const CMatrix& V = state.eigenbasis();
        const CMatrix down = V * (-beta * e).array().exp().matrix().cast<cplx>().asDiagonal() * V.adjoint();
        const CMatrix up = V * (beta * e).array().exp().matrix().cast<cplx>().asDiagonal() * V.adjoint();
        const CMatrix sigma_a = down * A * up;
        const cplx lhs = trace_product(rho * A, B);
        const cplx rhs = trace_product(rho * B, sigma_a);
        return std::abs(lhs - rhs);
    }

    // Eigenbasis sandwich: phi(x y) = sum_ij w_i x_ij y_ji, and the imaginary
    // time factor e^{-beta(l_j - l_i)} is folded into the log weight.
    const CMatrix& V = state.eigenbasis();
    const CMatrix Ae = V.adjoint() * A * V;
    const CMatrix Be = V.adjoint() * B * V;
    const RVector& lw = state.log_weights();
    cplx lhs{0.0, 0.0}, rhs{0.0, 0.0};
    for (Eigen::Index j = 0; j < Ae.cols(); ++j) {
        for (Eigen::Index i = 0; i < Ae.rows(); ++i) {
            lhs += std::exp(lw[i]) * Ae(i, j) * Be(j, i);
            rhs += std::exp(lw[i] - beta * (e[j] - e[i])) * Be(i, j) * Ae(j, i);
        }
    }
    return std::abs(lhs - rhs);
}

std::vector<int> contributing_translates(const SpinChainModel& model, const LocalObservable& a,
                                         std::span<const int> offsets, int n) {
    std::vector<int> out;
    const int r = model.range();
    for (int j : offsets) {
        const bool overlaps = j <= a.hi && j + r - 1 >= a.lo;
        if (!overlaps) continue;
        if (j < 0 || j + r - 1 >= n) {
            throw DimensionMismatchError("translate at offset " + std::to_string(j) + " overlapping the support leaves the " +
                                         std::to_string(n) + "-site chain");
        }
        out.push_back(j);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AlgebraElement derivation(const SpinChainModel& model, const LocalObservable& a, std::span<const int> offsets,
                          int n, const Budget& budget) {
    const auto used = contributing_translates(model, a, offsets, n);
    const AlgebraElement x = place(a, n, model.site_dim());
    const AlgebraElement h = interaction_sum(model, n, used, budget);
    return commutator(h, x);
}

double default_analyticity_radius(const SpinChainModel& model) {
    const double r = model.range();
    const double norm = model.interaction_norm();
    if (norm == 0.0) return std::numeric_limits<double>::infinity();
    return 0.5 / (r * norm * (2.0 * r + 1.0));
}

double norm_upper_bound(const CMatrix& x) {
    if (x.size() == 0) return 0.0;
    const double col = x.cwiseAbs().colwise().sum().maxCoeff();
    const double row = x.cwiseAbs().rowwise().sum().maxCoeff();
    return std::sqrt(col * row);
}

SeriesResult evolve_series(const SpinChainModel& model, const LocalObservable& a, cplx z,
                           std::span<const int> offsets, int n, const SeriesOptions& opts, const Budget& budget) {
    const double radius = opts.radius > 0.0 ? opts.radius : default_analyticity_radius(model);
    if (std::abs(z) > radius) {
        throw InvariantError("analyticity_budget", "|z| = " + std::to_string(std::abs(z)) +
                                                       " exceeds the series radius " + std::to_string(radius));
    }
    const CMatrix h = interaction_sum(model, n, offsets, budget).matrix();
    const double h_norm = op_norm(AlgebraElement(h));
    const CMatrix x = place(a, n, model.site_dim()).matrix();

    CMatrix term = x;
    CMatrix sum = x;
    const cplx iz = cplx{0.0, 1.0} * z;
    const double abs_z = std::abs(z);
    for (int m = 1; m < opts.max_terms; ++m) {
        term = (iz / static_cast<double>(m)) * (h * term - term * h);
        sum += term;
        // ||T_{j+1}|| <= q ||T_j|| for all j >= m, q = 2|z| ||H_I|| / (m + 1).
        const double q = 2.0 * abs_z * h_norm / (m + 1.0);
        const double t = norm_upper_bound(term);
        if (q < 1.0) {
            const double tail = t * q / (1.0 - q);
            if (tail < opts.tol) return {AlgebraElement(std::move(sum)), m + 1, tail};
        }
    }
    throw ConvergenceError("evolve_series: tail bound did not reach " + std::to_string(opts.tol) + " within " +
                           std::to_string(opts.max_terms) + " terms");
}

AlgebraElement evolve_conjugation(const SpinChainModel& model, const LocalObservable& a, cplx z,
                                  std::span<const int> offsets, int n, const Budget& budget) {
    const CMatrix h = interaction_sum(model, n, offsets, budget).matrix();
    const auto dec = spectral::decompose(h);
    const cplx iz = cplx{0.0, 1.0} * z;
    const Eigen::VectorXcd fwd = (iz * dec.values.cast<cplx>()).array().exp();
    const Eigen::VectorXcd back = (-iz * dec.values.cast<cplx>()).array().exp();
    const CMatrix x = place(a, n, model.site_dim()).matrix();
    const CMatrix& V = dec.vectors;
    CMatrix out = V * fwd.asDiagonal() * (V.adjoint() * x * V) * back.asDiagonal() * V.adjoint();
    return AlgebraElement(std::move(out));
}

}  // namespace thermo
