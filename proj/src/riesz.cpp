#include "thermo/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/kernels.hpp"

namespace thermo {

RieszSpec::RieszSpec(std::vector<std::int64_t> frequencies, std::vector<double> amplitudes, double q)
    : freqs_(std::move(frequencies)), amps_(std::move(amplitudes)), q_(q) {
    if (!(q_ > 3.0) || !std::isfinite(q_)) throw InvariantError("q_gt_3", "lacunarity ratio q must be > 3");
    if (freqs_.size() != amps_.size()) throw DimensionMismatchError("frequencies and amplitudes differ in length");
    for (std::size_t k = 0; k < freqs_.size(); ++k) {
        if (freqs_[k] <= 0) throw InvariantError("positive_frequency", "frequencies must be positive");
        if (!(std::abs(amps_[k]) < 1.0)) throw InvariantError("amplitude_range", "amplitudes must lie in (-1, 1)");
        if (k > 0 && static_cast<double>(freqs_[k]) < q_ * static_cast<double>(freqs_[k - 1])) {
            throw InvariantError("lacunary", "n_" + std::to_string(k + 1) + " / n_" + std::to_string(k) + " < q");
        }
    }
}

RieszSpec RieszSpec::prefix(int k) const {
    if (k < 0 || k > size()) throw DimensionMismatchError("prefix length exceeds the stored factors");
    return RieszSpec({freqs_.begin(), freqs_.begin() + k}, {amps_.begin(), amps_.begin() + k}, q_);
}

std::vector<double> RieszSpec::square_partial_sums() const {
    std::vector<double> out;
    double acc = 0.0;
    for (double a : amps_) out.push_back(acc += a * a);
    return out;
}

bool RieszSpec::amplitudes_decreasing() const {
    for (std::size_t k = 1; k < amps_.size(); ++k) {
        if (std::abs(amps_[k]) > std::abs(amps_[k - 1])) return false;
    }
    return true;
}

std::optional<std::vector<int>> decompose_prefix(const RieszSpec& spec, int k, std::int64_t n) {
    if (k < 0 || k > spec.size()) throw DimensionMismatchError("prefix length exceeds the stored factors");
    const auto& f = spec.frequencies();
    std::vector<std::int64_t> below(static_cast<std::size_t>(k) + 1, 0);  // sum of n_j for j < index
    for (int j = 0; j < k; ++j) below[static_cast<std::size_t>(j) + 1] = below[static_cast<std::size_t>(j)] + f[static_cast<std::size_t>(j)];
    std::vector<int> eps(static_cast<std::size_t>(k), 0);
    std::int64_t rest = n;
    // n_j > 2 sum_{i<j} n_i, so at most one sign keeps the remainder coverable.
    for (int j = k - 1; j >= 0; --j) {
        const std::int64_t nj = f[static_cast<std::size_t>(j)];
        int choice = 0;
        if (rest > 0 && std::abs(rest - nj) < std::abs(rest)) choice = 1;
        if (rest < 0 && std::abs(rest + nj) < std::abs(rest)) choice = -1;
        rest -= choice * nj;
        eps[static_cast<std::size_t>(j)] = choice;
        if (std::abs(rest) > below[static_cast<std::size_t>(j)]) return std::nullopt;
    }
    if (rest != 0) return std::nullopt;
    return eps;
}

std::optional<std::vector<int>> decompose(const RieszSpec& spec, std::int64_t n) {
    // Any representation using an unseen factor K+1 has
    // |n| >= n_{K+1} - sum_{k<=K} n_k >= q n_K - sum_{k<=K} n_k.
    const auto& f = spec.frequencies();
    const double total = static_cast<double>(std::accumulate(f.begin(), f.end(), std::int64_t{0}));
    const double reach = f.empty() ? 0.0 : spec.q() * static_cast<double>(f.back()) - total;
    if (static_cast<double>(std::abs(n)) >= reach && n != 0) {
        throw UndecidableError("|n| = " + std::to_string(std::abs(n)) +
                               " may be represented through frequencies beyond the stored prefix");
    }
    return decompose_prefix(spec, spec.size(), n);
}

namespace {

double coefficient_from(const RieszSpec& spec, const std::optional<std::vector<int>>& eps) {
    if (!eps) return 0.0;
    double c = 1.0;
    for (std::size_t k = 0; k < eps->size(); ++k) {
        if ((*eps)[k] != 0) c *= spec.amplitudes()[k] / 2.0;
    }
    return c;
}

}  // namespace

double fourier_coefficient(const RieszSpec& spec, std::int64_t n) {
    return coefficient_from(spec, decompose(spec, n));
}

double partial_fourier_coefficient(const RieszSpec& spec, int k, std::int64_t n) {
    return coefficient_from(spec, decompose_prefix(spec, k, n));
}

double partial_density(const RieszSpec& spec, int k, double t) {
    if (k < 0 || k > spec.size()) throw DimensionMismatchError("prefix length exceeds the stored factors");
    double p = 1.0;
    for (int j = 0; j < k; ++j) {
        p *= 1.0 + spec.amplitudes()[static_cast<std::size_t>(j)] *
                       std::cos(static_cast<double>(spec.frequencies()[static_cast<std::size_t>(j)]) * t);
    }
    return p / (2.0 * std::numbers::pi);
}

CoefficientCheck verify_coefficients(const RieszSpec& spec, int k, std::int64_t n_max, std::int64_t grid) {
    if (k < 0 || k > spec.size()) throw DimensionMismatchError("prefix length exceeds the stored factors");
    if (n_max < 0) throw InvariantError("n_max", "n_max must be >= 0");
    const auto& f = spec.frequencies();
    const std::int64_t degree = std::accumulate(f.begin(), f.begin() + k, std::int64_t{0});
    const std::int64_t top = k > 0 ? f[static_cast<std::size_t>(k) - 1] : 0;
    // The trapezoid rule on N points is exact for e^{imt} unless N divides m;
    // the integrand's frequencies reach degree + n_max.
    const std::int64_t needed = degree + n_max + 1;
    if (grid == 0) grid = std::max(8 * std::max(top, n_max), needed);
    if (grid < needed) {
        throw InvariantError("nyquist", "grid of " + std::to_string(grid) + " points aliases frequencies up to " +
                                            std::to_string(degree + n_max));
    }
    std::vector<double> samples(static_cast<std::size_t>(grid));
    for (std::int64_t j = 0; j < grid; ++j) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid);
        // (1/N) sum f(t_j) e^{int_j} approximates (1/2pi) int f e^{int}; the
        // 2 pi of the density cancels that prefactor.
        samples[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * partial_density(spec, k, t);
    }
    const auto coeffs = kernels::parallel::trapezoid_fourier(samples, static_cast<int>(n_max));
    CoefficientCheck out;
    out.grid = grid;
    for (std::int64_t n = -n_max; n <= n_max; ++n) {
        const auto& c = coeffs[static_cast<std::size_t>(n + n_max)];
        const double exact = partial_fourier_coefficient(spec, k, n);
        out.quadrature.push_back(c.real());
        out.closed_form.push_back(exact);
        out.max_error = std::max(out.max_error, std::abs(c - std::complex<double>(exact, 0.0)));
    }
    return out;
}

}  // namespace thermo
