#pragma once

// Data-parallel inner loops. Each kernel exists twice: `serial` is the
// reference implementation kept for testing, `parallel` is the OpenMP version
// used by the library. Both write every output entry from exactly one loop
// iteration, so results are bitwise identical regardless of thread count.

#include <cstdint>
#include <span>
#include <vector>

#include "thermo/algebra.hpp"

namespace thermo::kernels {

/// Digit layout of an n-site chain: site 0 is the most significant digit.
struct ChainShape {
    int n_sites;
    int site_dim;

    std::int64_t rows() const;
};

/// Potential data for classical word enumeration. Windows are words of
/// length `range` indexed base `alphabet`, first letter most significant;
/// `window_energy` is read only where `window_allowed` is nonzero.
struct WordTable {
    int alphabet;
    int range;
    std::span<const double> window_energy;
    std::span<const int> window_allowed;
};

namespace serial {

/// target += scale * (local acting on `sites`, identity elsewhere).
void add_local_term(CMatrix& target, const CMatrix& local, std::span<const int> sites,
                    ChainShape shape, cplx scale = 1.0);

/// target += diagonal of a diagonal local term acting on `sites`.
void add_local_diagonal(RVector& target, const RVector& local_diag, std::span<const int> sites,
                        ChainShape shape);

/// Energy sum_j window_energy(w_j ... w_{j+r-1}) of every word of length n,
/// or +inf for words containing a forbidden window. `cyclic` adds the r-1
/// windows that wrap around.
std::vector<double> word_energies(const WordTable& table, int n, bool cyclic);

/// (1/N) sum_j e^{i k t_j} f(t_j) on the uniform grid t_j = 2 pi j / N, for
/// every k in [-k_max, k_max] (index k + k_max).
std::vector<cplx> trapezoid_fourier(std::span<const double> samples, int k_max);

}  // namespace serial

namespace parallel {

void add_local_term(CMatrix& target, const CMatrix& local, std::span<const int> sites,
                    ChainShape shape, cplx scale = 1.0);
void add_local_diagonal(RVector& target, const RVector& local_diag, std::span<const int> sites,
                        ChainShape shape);
std::vector<double> word_energies(const WordTable& table, int n, bool cyclic);
std::vector<cplx> trapezoid_fourier(std::span<const double> samples, int k_max);

}  // namespace parallel

}  // namespace thermo::kernels
