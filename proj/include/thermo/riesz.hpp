#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace thermo {

/// Finite prefix of a lacunary Riesz product prod_k (1 + a_k cos n_k t).
class RieszSpec {
public:
    /// Enforces q > 3, n_{k+1} / n_k >= q, strictly increasing positive
    /// frequencies and |a_k| < 1.
    RieszSpec(std::vector<std::int64_t> frequencies, std::vector<double> amplitudes, double q);

    const std::vector<std::int64_t>& frequencies() const noexcept { return freqs_; }
    const std::vector<double>& amplitudes() const noexcept { return amps_; }
    double q() const noexcept { return q_; }
    int size() const noexcept { return static_cast<int>(freqs_.size()); }

    /// Prefix with the first K factors.
    RieszSpec prefix(int k) const;

    /// Partial sums of a_k^2 (the tail's divergence is not decidable).
    std::vector<double> square_partial_sums() const;
    /// |a_k| non-increasing over the stored prefix.
    bool amplitudes_decreasing() const;

private:
    std::vector<std::int64_t> freqs_;
    std::vector<double> amps_;
    double q_;
};

/// Signs eps_k in {-1, 0, 1} with n = sum_k eps_k n_k, or nullopt when n has
/// no such representation. Throws UndecidableError when a representation
/// through frequencies beyond the stored prefix cannot be ruled out.
std::optional<std::vector<int>> decompose(const RieszSpec& spec, std::int64_t n);

/// Same search restricted to the first K factors; never undecidable.
std::optional<std::vector<int>> decompose_prefix(const RieszSpec& spec, int k, std::int64_t n);

/// mu_hat(n) = prod_k (a_k / 2)^{|eps_k|}, 0 without representation.
double fourier_coefficient(const RieszSpec& spec, std::int64_t n);

/// Closed formula for the K-factor partial product.
double partial_fourier_coefficient(const RieszSpec& spec, int k, std::int64_t n);

/// (1 / 2 pi) prod_{k <= K} (1 + a_k cos n_k t).
double partial_density(const RieszSpec& spec, int k, double t);

struct CoefficientCheck {
    double max_error = 0.0;
    std::int64_t grid = 0;
    std::vector<double> quadrature;  // real parts, index n + n_max
    std::vector<double> closed_form;
};

/// Trapezoid-rule Fourier coefficients of the K-factor density on a uniform
/// grid of `grid` points (0 picks max(8 max(n_K, n_max), sum n_k + n_max + 1)),
/// compared with the closed formula for |n| <= n_max. Throws InvariantError
/// if the grid aliases.
CoefficientCheck verify_coefficients(const RieszSpec& spec, int k, std::int64_t n_max, std::int64_t grid = 0);

}  // namespace thermo
