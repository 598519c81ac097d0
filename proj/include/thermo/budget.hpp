#pragma once

#include <cstddef>
#include <cstdint>

namespace thermo {

/// Caps on dense finite-volume computations.
struct Budget {
    std::size_t max_rows = 16384;  // dense matrices only
    std::size_t memory_bytes = std::size_t{2} << 30;  // 2 GiB

    /// Throws BudgetExceededError unless a dense `rows`x`rows` problem fits.
    /// `matrices` is the number of simultaneously live dense complex matrices.
    void require_dense(std::size_t rows, int matrices = 3) const;

    /// Throws BudgetExceededError unless `rows` diagonal entries fit in memory.
    void require_rows(std::size_t rows) const;
    /// Largest diagonal that fits.
    std::size_t diagonal_rows() const;
};

/// base^exp, throwing BudgetExceededError on overflow past `cap`.
std::size_t checked_pow(std::size_t base, int exp, std::size_t cap);

}  // namespace thermo
