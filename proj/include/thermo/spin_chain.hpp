#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "thermo/algebra.hpp"
#include "thermo/budget.hpp"
#include "thermo/report.hpp"

namespace thermo {

enum class Boundary { open, periodic };

std::string to_string(Boundary b);
/// Throws InvariantError for anything but "open" / "periodic".
Boundary parse_boundary(std::string_view text);

/// Translation-invariant finite-range interaction on a chain of d-level
/// sites: `interaction` acts on `range` consecutive sites and its translates
/// commute once they are `range` sites apart.
class SpinChainModel {
public:
    SpinChainModel(int site_dim, int range, CMatrix interaction, double beta = 1.0,
                   Boundary boundary = Boundary::open);

    int site_dim() const noexcept { return site_dim_; }
    int range() const noexcept { return range_; }
    /// Offset beyond which translates of the interaction commute.
    int commutation_radius() const noexcept { return range_; }
    const AlgebraElement& interaction() const noexcept { return interaction_; }
    const CMatrix& local() const { return interaction_.matrix(); }
    double beta() const noexcept { return beta_; }
    Boundary boundary() const noexcept { return boundary_; }
    double interaction_norm() const noexcept { return norm_; }

    SpinChainModel with_beta(double beta) const;
    SpinChainModel with_boundary(Boundary b) const;
    SpinChainModel with_interaction(CMatrix h) const;

    /// Site tuples of the interaction terms of an n-site volume. Open
    /// boundary keeps the n-r+1 translates inside the box; periodic adds the
    /// r-1 wrap-around ones.
    std::vector<std::vector<int>> translates(int n) const;

private:
    int site_dim_;
    int range_;
    AlgebraElement interaction_;
    double beta_;
    Boundary boundary_;
    double norm_;
};

enum class SpectralPath {
    automatic,  // diagonal interactions skip the dense eigenproblem
    dense,
};

/// sum of the translates of h over an n-site volume (unscaled by beta).
AlgebraElement finite_volume_hamiltonian(const SpinChainModel& model, int n, const Budget& budget = {});

/// sum_{j in offsets} of h placed on sites [j, j+r-1] of an open n-site chain.
AlgebraElement interaction_sum(const SpinChainModel& model, int n, std::span<const int> offsets,
                               const Budget& budget = {});

/// Spectrum of H_n, ascending.
RVector finite_volume_energies(const SpinChainModel& model, int n, const Budget& budget = {},
                               SpectralPath path = SpectralPath::automatic);

/// log Tr e^{-beta H_n}.
double log_partition(const SpinChainModel& model, int n, const Budget& budget = {},
                     SpectralPath path = SpectralPath::automatic);

struct FiniteVolumePoint {
    int n = 0;
    double log_z = 0.0;
    double p_n = 0.0;
};

std::vector<FiniteVolumePoint> pressure_sequence(const SpinChainModel& model, int n_min, int n_max,
                                                 const Budget& budget = {});

/// Gapped-block schedule: m blocks of length k, the last p sites of each
/// block left out so that neighbouring blocks commute.
struct GapSchedule {
    int k = 0;
    int p = 0;
    int m = 0;
};

/// (1/(k m)) log Tr exp(-beta sum_{j in I} alpha^j(h)) with
/// I = union_{b<m} [b k, b k + k - p]. Blocks commute, so the trace
/// factorizes into m copies of a single k-site block.
double gapped_pressure(const SpinChainModel& model, const GapSchedule& sched, const Budget& budget = {});

/// Same quantity evaluated on the whole m k-site chain without factorizing.
double gapped_pressure_unfactorized(const SpinChainModel& model, const GapSchedule& sched,
                                    const Budget& budget = {});

/// Offsets I of the gapped schedule.
std::vector<int> gapped_offsets(const GapSchedule& sched);

struct PressureEstimate {
    double value = 0.0;
    double error_bar = 0.0;
};

/// log Z_{n_max} - log Z_{n_max - 1}, with |value - p_{n_max}| as the error bar.
PressureEstimate pressure_estimate(const SpinChainModel& model, int n_max, const Budget& budget = {});

/// Chain of k-site super-sites carrying sum_{j<k} alpha^j(h).
SpinChainModel block_model(const SpinChainModel& model, int k);

/// sum over the translates j of an n-site volume of alpha^{j+1}(K) - alpha^j(K),
/// for K of the model's range; telescopes to two boundary terms (open) or
/// zero (periodic).
AlgebraElement coboundary_hamiltonian(const SpinChainModel& k_model, int n, const Budget& budget = {});

/// Finite-volume forms of the monotonicity, shift, Lipschitz, power and
/// coboundary properties of the pressure. Record ids: "i", "i_derived",
/// "ii", "iv", "v", "vi".
Report check_pressure_properties(const SpinChainModel& h_model, const SpinChainModel& k_model, double c,
                                 int k, int n, const Budget& budget = {});

struct ConvexitySample {
    double lambda = 0.0;
    double p_n = 0.0;
};

struct ConvexityProbe {
    std::vector<ConvexitySample> samples;
    Report report;  // one record per interior grid triple
};

/// p_n(lambda H1 + (1 - lambda) H2) on the grid; midpoint convexity asserted
/// on consecutive triples with slack 1e-10.
ConvexityProbe convexity_probe(const SpinChainModel& h1, const SpinChainModel& h2,
                               std::span<const double> grid, int n, const Budget& budget = {});

/// Chain whose site is the tensor product of the two sites, carrying
/// h1 (x) 1 + 1 (x) h2. Ranges, beta and boundary must agree.
SpinChainModel tensor_product_model(const SpinChainModel& m1, const SpinChainModel& m2);

/// |p_n(product chain) - p_n(m1) - p_n(m2)|.
double tensor_additivity_check(const SpinChainModel& m1, const SpinChainModel& m2, int n,
                               const Budget& budget = {});

}  // namespace thermo
