#include "thermo/spin_chain.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/kernels.hpp"
#include "thermo/spectral.hpp"

namespace thermo {

std::string to_string(Boundary b) {
    return b == Boundary::open ? "open" : "periodic";
}

Boundary parse_boundary(std::string_view text) {
    if (text == "open") return Boundary::open;
    if (text == "periodic") return Boundary::periodic;
    throw InvariantError("boundary", "expected open or periodic, got '" + std::string(text) + "'");
}

namespace {

std::size_t local_rows(int d, int sites) {
    std::size_t r = 1;
    for (int i = 0; i < sites; ++i) r *= static_cast<std::size_t>(d);
    return r;
}

constexpr std::size_t kCommutationCheckRows = 256;

}  // namespace

SpinChainModel::SpinChainModel(int site_dim, int range, CMatrix interaction, double beta, Boundary boundary)
    : site_dim_(site_dim),
      range_(range),
      interaction_(std::move(interaction)),
      beta_(beta),
      boundary_(boundary),
      norm_(0.0) {
    if (site_dim_ < 2) throw InvariantError("site_dim", "site dimension must be >= 2, got " + std::to_string(site_dim_));
    if (range_ < 1) throw InvariantError("range", "range must be >= 1, got " + std::to_string(range_));
    if (!(beta_ > 0.0) || !std::isfinite(beta_)) {
        throw InvariantError("beta", "inverse temperature must be finite and > 0");
    }
    const std::size_t expect = checked_pow(static_cast<std::size_t>(site_dim_), range_, 1u << 20);
    if (static_cast<std::size_t>(interaction_.matrix().rows()) != expect) {
        throw DimensionMismatchError("interaction is " + std::to_string(interaction_.matrix().rows()) +
                                     "-dimensional, expected site_dim^range = " + std::to_string(expect));
    }
    if (!interaction_.matrix().allFinite()) throw InvariantError("finite", "interaction has non-finite entries");
    if (!interaction_.hermitian()) throw NotHermitianError("interaction is not hermitian");
    norm_ = op_norm(interaction_);

    // Translates at offsets >= range commute; spot-check the embedding at the
    // first such offset.
    const int chain = 2 * range_;
    if (local_rows(site_dim_, chain) <= kCommutationCheckRows) {
        const AlgebraElement base = embed(interaction_, {chain, site_dim_, 0, range_ - 1});
        for (int off = range_; off + range_ - 1 < chain; ++off) {
            const AlgebraElement moved = embed(interaction_, {chain, site_dim_, off, off + range_ - 1});
            const double defect = commutator(base, moved).matrix().cwiseAbs().maxCoeff();
            if (defect > 1e-12 * std::max(1.0, norm_ * norm_)) {
                throw InvariantError("commutation_radius", "translates at offset " + std::to_string(off) +
                                                               " do not commute");
            }
        }
    }
}

SpinChainModel SpinChainModel::with_beta(double beta) const {
    return SpinChainModel(site_dim_, range_, local(), beta, boundary_);
}

SpinChainModel SpinChainModel::with_boundary(Boundary b) const {
    return SpinChainModel(site_dim_, range_, local(), beta_, b);
}

SpinChainModel SpinChainModel::with_interaction(CMatrix h) const {
    return SpinChainModel(site_dim_, range_, std::move(h), beta_, boundary_);
}

std::vector<std::vector<int>> SpinChainModel::translates(int n) const {
    if (n < range_) {
        throw InvariantError("volume", "volume " + std::to_string(n) + " is smaller than the range " +
                                           std::to_string(range_));
    }
    std::vector<std::vector<int>> out;
    const int count = boundary_ == Boundary::open ? n - range_ + 1 : n;
    for (int j = 0; j < count; ++j) {
        std::vector<int> sites(static_cast<std::size_t>(range_));
        for (int i = 0; i < range_; ++i) sites[static_cast<std::size_t>(i)] = (j + i) % n;
        out.push_back(std::move(sites));
    }
    return out;
}

AlgebraElement finite_volume_hamiltonian(const SpinChainModel& model, int n, const Budget& budget) {
    const auto terms = model.translates(n);
    const std::size_t rows = checked_pow(static_cast<std::size_t>(model.site_dim()), n, budget.max_rows);
    budget.require_dense(rows, 1);
    const auto dim = static_cast<Eigen::Index>(rows);
    CMatrix h = CMatrix::Zero(dim, dim);
    const kernels::ChainShape shape{n, model.site_dim()};
    for (const auto& sites : terms) kernels::parallel::add_local_term(h, model.local(), sites, shape);
    return AlgebraElement(std::move(h));
}

AlgebraElement interaction_sum(const SpinChainModel& model, int n, std::span<const int> offsets,
                               const Budget& budget) {
    const std::size_t rows = checked_pow(static_cast<std::size_t>(model.site_dim()), n, budget.max_rows);
    budget.require_dense(rows, 1);
    const auto dim = static_cast<Eigen::Index>(rows);
    CMatrix h = CMatrix::Zero(dim, dim);
    const kernels::ChainShape shape{n, model.site_dim()};
    std::vector<int> sites(static_cast<std::size_t>(model.range()));
    for (int j : offsets) {
        if (j < 0 || j + model.range() - 1 >= n) {
            throw DimensionMismatchError("translate at offset " + std::to_string(j) + " leaves the " +
                                         std::to_string(n) + "-site chain");
        }
        std::iota(sites.begin(), sites.end(), j);
        kernels::parallel::add_local_term(h, model.local(), sites, shape);
    }
    return AlgebraElement(std::move(h));
}

RVector finite_volume_energies(const SpinChainModel& model, int n, const Budget& budget, SpectralPath path) {
    if (path == SpectralPath::automatic && is_diagonal(model.local())) {
        const auto terms = model.translates(n);
        const std::size_t rows = checked_pow(static_cast<std::size_t>(model.site_dim()), n, budget.diagonal_rows());
        RVector e = RVector::Zero(static_cast<Eigen::Index>(rows));
        const RVector local = model.local().diagonal().real();
        const kernels::ChainShape shape{n, model.site_dim()};
        for (const auto& sites : terms) kernels::parallel::add_local_diagonal(e, local, sites, shape);
        std::sort(e.data(), e.data() + e.size());
        return e;
    }
    return herm_eigenvalues(finite_volume_hamiltonian(model, n, budget));
}

double log_partition(const SpinChainModel& model, int n, const Budget& budget, SpectralPath path) {
    return log_sum_exp_neg(model.beta() * finite_volume_energies(model, n, budget, path));
}

std::vector<FiniteVolumePoint> pressure_sequence(const SpinChainModel& model, int n_min, int n_max,
                                                 const Budget& budget) {
    if (n_min < model.range() || n_max < n_min) {
        throw InvariantError("volumes", "need range <= n_min <= n_max");
    }
    // Fail before doing any work if the largest volume is out of budget.
    const bool diagonal = is_diagonal(model.local());
    checked_pow(static_cast<std::size_t>(model.site_dim()), n_max, diagonal ? budget.diagonal_rows() : budget.max_rows);
    std::vector<FiniteVolumePoint> out;
    for (int n = n_min; n <= n_max; ++n) {
        const double lz = log_partition(model, n, budget);
        out.push_back({n, lz, lz / n});
    }
    return out;
}

std::vector<int> gapped_offsets(const GapSchedule& sched) {
    std::vector<int> out;
    for (int b = 0; b < sched.m; ++b) {
        for (int j = b * sched.k; j <= b * sched.k + sched.k - sched.p; ++j) out.push_back(j);
    }
    return out;
}

namespace {

void validate_schedule(const SpinChainModel& model, const GapSchedule& sched) {
    if (sched.p < 1 || sched.m < 1) throw InvariantError("gap_schedule", "need p >= 1 and m >= 1");
    if (sched.k <= sched.p) throw InvariantError("gap_schedule", "block length k must exceed the gap p");
    if (sched.p != model.range()) {
        throw InvariantError("gap_schedule", "gap p must equal the interaction range " + std::to_string(model.range()));
    }
}

}  // namespace

double gapped_pressure(const SpinChainModel& model, const GapSchedule& sched, const Budget& budget) {
    validate_schedule(model, sched);
    // Each block's translates [bk, bk+k-p] cover exactly the sites [bk, bk+k-1].
    std::vector<int> block(static_cast<std::size_t>(sched.k - sched.p + 1));
    std::iota(block.begin(), block.end(), 0);
    const AlgebraElement hb = interaction_sum(model, sched.k, block, budget);
    const double per_block = log_trace_exp(hb * cplx{model.beta(), 0.0});
    return sched.m * per_block / (static_cast<double>(sched.k) * sched.m);
}

double gapped_pressure_unfactorized(const SpinChainModel& model, const GapSchedule& sched, const Budget& budget) {
    validate_schedule(model, sched);
    const auto offsets = gapped_offsets(sched);
    const AlgebraElement h = interaction_sum(model, sched.k * sched.m, offsets, budget);
    return log_trace_exp(h * cplx{model.beta(), 0.0}) / (static_cast<double>(sched.k) * sched.m);
}

PressureEstimate pressure_estimate(const SpinChainModel& model, int n_max, const Budget& budget) {
    if (n_max < model.range() + 2) {
        throw InvariantError("volumes", "pressure_estimate needs n_max >= range + 2");
    }
    const double lz = log_partition(model, n_max, budget);
    const double lz_prev = log_partition(model, n_max - 1, budget);
    const double value = lz - lz_prev;
    return {value, std::abs(value - lz / n_max)};
}

SpinChainModel block_model(const SpinChainModel& model, int k) {
    if (k < 1) throw InvariantError("block_length", "k must be >= 1");
    const int r = model.range();
    const int super_range = 1 + (r - 1 + k - 1) / k;
    const int sites = k * super_range;
    const SpinChainModel open = model.with_boundary(Boundary::open);
    std::vector<int> offsets(static_cast<std::size_t>(k));
    std::iota(offsets.begin(), offsets.end(), 0);
    Budget local_budget;
    local_budget.max_rows = std::size_t{1} << 14;
    const AlgebraElement hk = interaction_sum(open, sites, offsets, local_budget);
    const int super_dim = static_cast<int>(checked_pow(static_cast<std::size_t>(model.site_dim()), k, 1u << 14));
    return SpinChainModel(super_dim, super_range, hk.matrix(), model.beta(), model.boundary());
}

AlgebraElement coboundary_hamiltonian(const SpinChainModel& k_model, int n, const Budget& budget) {
    const int r = k_model.range();
    if (n < r + 1) throw InvariantError("volume", "coboundary needs n >= range + 1");
    const std::size_t rows = checked_pow(static_cast<std::size_t>(k_model.site_dim()), n, budget.max_rows);
    budget.require_dense(rows, 1);
    const auto dim = static_cast<Eigen::Index>(rows);
    CMatrix c = CMatrix::Zero(dim, dim);
    const kernels::ChainShape shape{n, k_model.site_dim()};
    // alpha(K) - K has range r + 1; its translate j must fit in the volume.
    const int count = k_model.boundary() == Boundary::open ? n - r : n;
    std::vector<int> here(static_cast<std::size_t>(r)), next(static_cast<std::size_t>(r));
    for (int j = 0; j < count; ++j) {
        for (int i = 0; i < r; ++i) {
            here[static_cast<std::size_t>(i)] = (j + i) % n;
            next[static_cast<std::size_t>(i)] = (j + 1 + i) % n;
        }
        kernels::parallel::add_local_term(c, k_model.local(), next, shape, 1.0);
        kernels::parallel::add_local_term(c, k_model.local(), here, shape, -1.0);
    }
    return AlgebraElement(std::move(c));
}

namespace {

void require_compatible(const SpinChainModel& a, const SpinChainModel& b) {
    if (a.site_dim() != b.site_dim() || a.range() != b.range()) {
        throw DimensionMismatchError("models must share site dimension and range");
    }
    if (a.beta() != b.beta() || a.boundary() != b.boundary()) {
        throw InvariantError("compatible_models", "models must share beta and boundary");
    }
}

double min_eigenvalue(const CMatrix& m) {
    return spectral::eigenvalues(m)[0];
}

}  // namespace

Report check_pressure_properties(const SpinChainModel& h_model, const SpinChainModel& k_model, double c, int k,
                                 int n, const Budget& budget) {
    require_compatible(h_model, k_model);
    const int r = h_model.range();
    if (k < 1 || n < r * k || n % k != 0) {
        throw InvariantError("volume", "need n >= r*k with k dividing n");
    }
    const double beta = h_model.beta();
    const double p_h = log_partition(h_model, n, budget) / n;
    const double p_k = log_partition(k_model, n, budget) / n;
    Report rep;

    // (i) monotonicity, on the given pair when H <= K and on H <= H + (K - min K).
    const CMatrix& h = h_model.local();
    const CMatrix& kk = k_model.local();
    if (min_eigenvalue(kk - h) >= 0.0) rep.add_upper("i", p_k - p_h, 0.0);
    {
        const double shift = min_eigenvalue(kk);
        CMatrix above = h + kk - shift * CMatrix::Identity(kk.rows(), kk.cols());
        above = (0.5 * (above + above.adjoint())).eval();
        const double p_above = log_partition(h_model.with_interaction(above), n, budget) / n;
        rep.add_upper("i_derived", p_above - p_h, 0.0);
    }

    // (ii) exact shift: each of the volume's translates moves by c.
    {
        const CMatrix hc = h + c * CMatrix::Identity(h.rows(), h.cols());
        const double p_hc = log_partition(h_model.with_interaction(hc), n, budget) / n;
        const double terms = static_cast<double>(h_model.translates(n).size());
        rep.add_upper("ii", std::abs(p_hc - (p_h - beta * c * terms / n)), 1e-10);
    }

    // (iv) Lipschitz bound.
    rep.add_upper("iv", std::abs(p_h - p_k), beta * op_norm(AlgebraElement(CMatrix(h - kk))));

    // (v) power of the shift: k-site super-sites carrying sum_{j<k} alpha^j(h).
    {
        const SpinChainModel blocked = block_model(h_model, k);
        const int volume = n / k;
        const double p_blocked = log_partition(blocked, volume, budget) / volume;
        rep.add_upper("v", std::abs(p_blocked - k * p_h), 2.0 * beta * h_model.interaction_norm() * k * r / n);
    }

    // (vi) coboundary invariance.
    {
        AlgebraElement hn = finite_volume_hamiltonian(h_model, n, budget);
        hn += coboundary_hamiltonian(k_model, n, budget);
        const double p_cob = log_trace_exp(hn * cplx{beta, 0.0}) / n;
        rep.add_upper("vi", std::abs(p_cob - p_h), 2.0 * beta * k_model.interaction_norm() / n);
    }
    return rep;
}

ConvexityProbe convexity_probe(const SpinChainModel& h1, const SpinChainModel& h2, std::span<const double> grid,
                               int n, const Budget& budget) {
    require_compatible(h1, h2);
    ConvexityProbe out;
    for (double lambda : grid) {
        if (!(lambda >= 0.0 && lambda <= 1.0)) throw InvariantError("grid", "lambda must lie in [0, 1]");
        CMatrix mix = lambda * h1.local() + (1.0 - lambda) * h2.local();
        mix = (0.5 * (mix + mix.adjoint())).eval();
        out.samples.push_back({lambda, log_partition(h1.with_interaction(mix), n, budget) / n});
    }
    for (std::size_t i = 1; i + 1 < out.samples.size(); ++i) {
        const auto& a = out.samples[i - 1];
        const auto& m = out.samples[i];
        const auto& b = out.samples[i + 1];
        if (!(a.lambda < m.lambda && m.lambda < b.lambda)) {
            throw InvariantError("grid", "convexity grid must be strictly increasing");
        }
        const double w = (b.lambda - m.lambda) / (b.lambda - a.lambda);
        out.report.add_upper("convex_" + std::to_string(i), m.p_n - (w * a.p_n + (1.0 - w) * b.p_n), 1e-10);
    }
    return out;
}

SpinChainModel tensor_product_model(const SpinChainModel& m1, const SpinChainModel& m2) {
    if (m1.range() != m2.range()) throw DimensionMismatchError("tensor product needs equal ranges");
    if (m1.beta() != m2.beta() || m1.boundary() != m2.boundary()) {
        throw InvariantError("compatible_models", "models must share beta and boundary");
    }
    const int r = m1.range();
    const int d1 = m1.site_dim(), d2 = m2.site_dim();
    const auto dim1 = static_cast<Eigen::Index>(local_rows(d1, r));
    const auto dim2 = static_cast<Eigen::Index>(local_rows(d2, r));
    const auto dim = dim1 * dim2;
    // Product site digit (a, b) -> a*d2 + b; the product local index
    // interleaves the digits of the two chains site by site.
    std::vector<Eigen::Index> first(static_cast<std::size_t>(dim)), second(static_cast<std::size_t>(dim));
    for (Eigen::Index p = 0; p < dim; ++p) {
        Eigen::Index rem = p, a = 0, b = 0, place1 = 1, place2 = 1;
        for (int s = 0; s < r; ++s) {
            const Eigen::Index digit = rem % (d1 * d2);
            rem /= d1 * d2;
            a += (digit / d2) * place1;
            b += (digit % d2) * place2;
            place1 *= d1;
            place2 *= d2;
        }
        first[static_cast<std::size_t>(p)] = a;
        second[static_cast<std::size_t>(p)] = b;
    }
    CMatrix h = CMatrix::Zero(dim, dim);
    for (Eigen::Index p = 0; p < dim; ++p) {
        for (Eigen::Index q = 0; q < dim; ++q) {
            const auto a = first[static_cast<std::size_t>(p)], a2 = first[static_cast<std::size_t>(q)];
            const auto b = second[static_cast<std::size_t>(p)], b2 = second[static_cast<std::size_t>(q)];
            cplx v{0.0, 0.0};
            if (b == b2) v += m1.local()(a, a2);
            if (a == a2) v += m2.local()(b, b2);
            h(p, q) = v;
        }
    }
    return SpinChainModel(d1 * d2, r, std::move(h), m1.beta(), m1.boundary());
}

double tensor_additivity_check(const SpinChainModel& m1, const SpinChainModel& m2, int n, const Budget& budget) {
    const SpinChainModel product = tensor_product_model(m1, m2);
    const double p = log_partition(product, n, budget) / n;
    return std::abs(p - log_partition(m1, n, budget) / n - log_partition(m2, n, budget) / n);
}

}  // namespace thermo
