#pragma once

#include <complex>
#include <span>
#include <vector>

#include "thermo/algebra.hpp"
#include "thermo/spin_chain.hpp"

namespace thermo {

/// An operator supported on the sites [lo, hi] of a chain.
struct LocalObservable {
    int lo = 0;
    int hi = 0;
    CMatrix op;

    int width() const noexcept { return hi - lo + 1; }
};

/// Places the observable on an n-site chain. Throws DimensionMismatchError if
/// the support leaves the volume.
AlgebraElement place(const LocalObservable& a, int n, int site_dim);

/// Finite-volume Gibbs state e^{-beta H_n} / Z, kept together with the
/// spectral decomposition of H_n it was built from.
class GibbsState {
public:
    GibbsState(SpinChainModel model, int n, double beta, AlgebraElement hamiltonian, RVector energies,
               CMatrix basis);

    const SpinChainModel& model() const noexcept { return model_; }
    int volume() const noexcept { return n_; }
    double beta() const noexcept { return beta_; }
    double log_z() const noexcept { return log_z_; }
    const AlgebraElement& density() const noexcept { return density_; }
    const AlgebraElement& hamiltonian() const noexcept { return hamiltonian_; }
    const RVector& energies() const noexcept { return energies_; }
    const CMatrix& eigenbasis() const noexcept { return basis_; }
    /// log of the Gibbs weight of each eigenvector of H_n.
    const RVector& log_weights() const noexcept { return log_weights_; }

private:
    SpinChainModel model_;
    int n_;
    double beta_;
    AlgebraElement hamiltonian_;
    RVector energies_;
    CMatrix basis_;
    RVector log_weights_;
    double log_z_;
    AlgebraElement density_;
};

/// beta >= 0 is taken from the argument, not the model.
GibbsState gibbs_state(const SpinChainModel& model, int n, double beta, const Budget& budget = {});

/// -Tr(rho log rho) from the eigenvalues of rho, with 0 log 0 = 0.
double von_neumann_entropy(const AlgebraElement& density);
/// Re Tr(rho x).
double expectation(const AlgebraElement& density, const AlgebraElement& x);

double entropy(const GibbsState& state);
double energy(const GibbsState& state);

/// |p_n - (S/n - beta E/n)|; zero for the Gibbs state.
double variational_identity_check(const GibbsState& state);

/// S(rho)/n - beta Tr(rho H_n)/n for an arbitrary density on the state's volume.
double trial_free_energy(const GibbsState& state, const AlgebraElement& density);

/// sigma^{(x) n}.
AlgebraElement product_density(const CMatrix& site_density, int n);

/// |phi(ab) - phi(b sigma_{i beta}(a))| with sigma_{i beta}(a) = e^{-beta H} a e^{beta H}.
/// Evaluated by dense conjugation while beta ||H_n|| <= 5, in the H_n
/// eigenbasis with log-domain weights beyond that.
double kms_residual(const GibbsState& state, const LocalObservable& a, const LocalObservable& b);

/// Translates j in I whose support meets supp(a). Throws
/// DimensionMismatchError if one of them leaves the n-site chain.
std::vector<int> contributing_translates(const SpinChainModel& model, const LocalObservable& a,
                                         std::span<const int> offsets, int n);

/// delta_{H,I}(a) = sum_{j in I} [alpha^j(h), a] on an open n-site chain.
AlgebraElement derivation(const SpinChainModel& model, const LocalObservable& a, std::span<const int> offsets,
                          int n, const Budget& budget = {});

/// 0.5 / (r ||h|| (2r + 1)).
double default_analyticity_radius(const SpinChainModel& model);

struct SeriesOptions {
    double tol = 1e-12;
    int max_terms = 200;
    /// Largest admissible |z|; non-positive selects default_analyticity_radius.
    double radius = 0.0;
};

struct SeriesResult {
    AlgebraElement value;
    int terms_used = 0;
    /// Bound on the norm of the discarded tail.
    double tail_bound = 0.0;
};

/// sum_m (iz)^m / m! delta^m(a), truncated once the ratio bound on the tail
/// drops below opts.tol. Throws InvariantError if |z| exceeds the radius and
/// ConvergenceError if max_terms is reached first.
SeriesResult evolve_series(const SpinChainModel& model, const LocalObservable& a, cplx z,
                           std::span<const int> offsets, int n, const SeriesOptions& opts = {},
                           const Budget& budget = {});

/// e^{iz H_I} a e^{-iz H_I} with H_I = sum_{j in I} alpha^j(h).
AlgebraElement evolve_conjugation(const SpinChainModel& model, const LocalObservable& a, cplx z,
                                  std::span<const int> offsets, int n, const Budget& budget = {});

/// sqrt(||x||_1 ||x||_inf), an upper bound for the operator norm.
double norm_upper_bound(const CMatrix& x);

}  // namespace thermo
