#include "thermo/kernels.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "thermo/errors.hpp"

namespace thermo::kernels {

std::int64_t ChainShape::rows() const {
    std::int64_t r = 1;
    for (int i = 0; i < n_sites; ++i) r *= site_dim;
    return r;
}

namespace {

// Place values of the sites inside the full index, site 0 most significant.
std::vector<std::int64_t> site_strides(std::span<const int> sites, ChainShape shape) {
    std::vector<std::int64_t> strides;
    strides.reserve(sites.size());
    for (int s : sites) {
        if (s < 0 || s >= shape.n_sites) throw DimensionMismatchError("site index outside the chain");
        std::int64_t st = 1;
        for (int i = s + 1; i < shape.n_sites; ++i) st *= shape.site_dim;
        strides.push_back(st);
    }
    return strides;
}

struct LocalIndexer {
    std::vector<std::int64_t> strides;
    int d;

    // Local index of `row` restricted to the sites, and the row with those
    // digits cleared.
    void split(std::int64_t row, std::int64_t& local, std::int64_t& rest) const {
        local = 0;
        rest = row;
        for (auto st : strides) {
            const std::int64_t digit = (row / st) % d;
            local = local * d + digit;
            rest -= digit * st;
        }
    }

    std::int64_t compose(std::int64_t rest, std::int64_t local) const {
        std::int64_t out = rest;
        for (std::size_t k = strides.size(); k-- > 0;) {
            out += (local % d) * strides[k];
            local /= d;
        }
        return out;
    }
};

template <bool Parallel>
void add_local_term_impl(CMatrix& target, const CMatrix& local, std::span<const int> sites,
                         ChainShape shape, cplx scale) {
    const std::int64_t rows = shape.rows();
    if (target.rows() != rows || target.cols() != rows) {
        throw DimensionMismatchError("target matrix does not match the chain dimension");
    }
    std::int64_t local_dim = 1;
    for (std::size_t i = 0; i < sites.size(); ++i) local_dim *= shape.site_dim;
    if (local.rows() != local_dim || local.cols() != local_dim) {
        throw DimensionMismatchError("local operator does not act on the given sites");
    }
    const LocalIndexer idx{site_strides(sites, shape), shape.site_dim};
    // Column-major storage: iterate columns in the outer loop so each thread
    // owns whole columns.
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t col = 0; col < rows; ++col) {
        std::int64_t b = 0, rest = 0;
        idx.split(col, b, rest);
        for (std::int64_t a = 0; a < local_dim; ++a) {
            const cplx v = local(a, b);
            if (v == cplx{0.0, 0.0}) continue;
            target(idx.compose(rest, a), col) += scale * v;
        }
    }
}

template <bool Parallel>
void add_local_diagonal_impl(RVector& target, const RVector& local_diag, std::span<const int> sites,
                             ChainShape shape) {
    const std::int64_t rows = shape.rows();
    if (target.size() != rows) throw DimensionMismatchError("target vector does not match the chain dimension");
    const LocalIndexer idx{site_strides(sites, shape), shape.site_dim};
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t row = 0; row < rows; ++row) {
        std::int64_t a = 0, rest = 0;
        idx.split(row, a, rest);
        target[row] += local_diag[a];
    }
}

template <bool Parallel>
std::vector<double> word_energies_impl(const WordTable& t, int n, bool cyclic) {
    const int s = t.alphabet;
    const int r = t.range;
    if (r < 1 || n < r) throw DimensionMismatchError("word length must be at least the window range");
    if (n > 64) throw BudgetExceededError("word enumeration is limited to 64 letters");
    std::int64_t words = 1, windows = 1;
    for (int i = 0; i < n; ++i) words *= s;
    for (int i = 0; i < r; ++i) windows *= s;
    if (static_cast<std::int64_t>(t.window_energy.size()) != windows ||
        static_cast<std::int64_t>(t.window_allowed.size()) != windows) {
        throw DimensionMismatchError("word table does not hold alphabet^range windows");
    }
    std::vector<double> out(static_cast<std::size_t>(words));
    constexpr double inf = std::numeric_limits<double>::infinity();
    const int count = cyclic ? n : n - r + 1;
#pragma omp parallel for schedule(static) if (Parallel)
    for (std::int64_t w = 0; w < words; ++w) {
        int letters[64];
        std::int64_t rem = w;
        for (int j = n - 1; j >= 0; --j) {
            letters[j] = static_cast<int>(rem % s);
            rem /= s;
        }
        double e = 0.0;
        bool ok = true;
        for (int j = 0; j < count && ok; ++j) {
            std::int64_t idx = 0;
            for (int i = 0; i < r; ++i) idx = idx * s + letters[(j + i) % n];
            if (!t.window_allowed[static_cast<std::size_t>(idx)]) ok = false;
            else e += t.window_energy[static_cast<std::size_t>(idx)];
        }
        out[static_cast<std::size_t>(w)] = ok ? e : inf;
    }
    return out;
}

template <bool Parallel>
std::vector<cplx> trapezoid_fourier_impl(std::span<const double> samples, int k_max) {
    const auto grid = static_cast<std::int64_t>(samples.size());
    std::vector<cplx> out(static_cast<std::size_t>(2 * k_max + 1));
#pragma omp parallel for schedule(static) if (Parallel)
    for (int k = -k_max; k <= k_max; ++k) {
        double re = 0.0, im = 0.0;
        for (std::int64_t j = 0; j < grid; ++j) {
            // Reduce k*j modulo the grid so the angle stays exact.
            const std::int64_t phase = ((static_cast<std::int64_t>(k) * j) % grid + grid) % grid;
            const double angle = 2.0 * std::numbers::pi * static_cast<double>(phase) / static_cast<double>(grid);
            re += samples[static_cast<std::size_t>(j)] * std::cos(angle);
            im += samples[static_cast<std::size_t>(j)] * std::sin(angle);
        }
        out[static_cast<std::size_t>(k + k_max)] = {re / static_cast<double>(grid), im / static_cast<double>(grid)};
    }
    return out;
}

}  // namespace

namespace serial {

void add_local_term(CMatrix& target, const CMatrix& local, std::span<const int> sites, ChainShape shape,
                    cplx scale) {
    add_local_term_impl<false>(target, local, sites, shape, scale);
}

void add_local_diagonal(RVector& target, const RVector& local_diag, std::span<const int> sites,
                        ChainShape shape) {
    add_local_diagonal_impl<false>(target, local_diag, sites, shape);
}

std::vector<double> word_energies(const WordTable& table, int n, bool cyclic) {
    return word_energies_impl<false>(table, n, cyclic);
}

std::vector<cplx> trapezoid_fourier(std::span<const double> samples, int k_max) {
    return trapezoid_fourier_impl<false>(samples, k_max);
}

}  // namespace serial

namespace parallel {

void add_local_term(CMatrix& target, const CMatrix& local, std::span<const int> sites, ChainShape shape,
                    cplx scale) {
    add_local_term_impl<true>(target, local, sites, shape, scale);
}

void add_local_diagonal(RVector& target, const RVector& local_diag, std::span<const int> sites,
                        ChainShape shape) {
    add_local_diagonal_impl<true>(target, local_diag, sites, shape);
}

std::vector<double> word_energies(const WordTable& table, int n, bool cyclic) {
    return word_energies_impl<true>(table, n, cyclic);
}

std::vector<cplx> trapezoid_fourier(std::span<const double> samples, int k_max) {
    return trapezoid_fourier_impl<true>(samples, k_max);
}

}  // namespace parallel

}  // namespace thermo::kernels
