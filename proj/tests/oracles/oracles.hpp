#pragma once

// Reference implementations used only by the tests. They share no code with
// the library: plain loops, no LAPACK, no kernels.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;

// Cyclic Jacobi rotations on a real symmetric matrix; ascending eigenvalues.
inline std::vector<double> jacobi_eigenvalues(RMatrix a) {
    const Eigen::Index n = a.rows();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (off < 1e-30 * std::max(1.0, a.squaredNorm())) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
            }
        }
    }
    std::vector<double> ev(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) ev[static_cast<std::size_t>(i)] = a(i, i);
    std::sort(ev.begin(), ev.end());
    return ev;
}

// Hermitian A + iB through the real form [[A, -B], [B, A]], whose spectrum is
// that of the Hermitian matrix with every eigenvalue doubled.
inline std::vector<double> hermitian_eigenvalues(const CMatrix& h) {
    const Eigen::Index n = h.rows();
    RMatrix big(2 * n, 2 * n);
    big << h.real(), -h.imag(), h.imag(), h.real();
    const auto all = jacobi_eigenvalues(big);
    std::vector<double> out;
    for (std::size_t i = 0; i < all.size(); i += 2) out.push_back(0.5 * (all[i] + all[i + 1]));
    return out;
}

// e^{m} by Taylor series with scaling and squaring.
inline CMatrix expm(const CMatrix& m) {
    const double norm = m.cwiseAbs().rowwise().sum().maxCoeff();
    int squarings = 0;
    while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
    const CMatrix x = m / std::pow(2.0, squarings);
    CMatrix term = CMatrix::Identity(m.rows(), m.cols()), sum = term;
    for (int k = 1; k < 30; ++k) {
        term = term * x / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline double log_sum_exp_neg(const std::vector<double>& e) {
    const double lo = *std::min_element(e.begin(), e.end());
    double s = 0.0;
    for (double x : e) s += std::exp(-(x - lo));
    return -lo + std::log(s);
}

// Base-d digits of a basis index, site 0 first.
inline std::vector<int> digits(std::int64_t index, int d, int n) {
    std::vector<int> out(static_cast<std::size_t>(n));
    for (int s = n - 1; s >= 0; --s) {
        out[static_cast<std::size_t>(s)] = static_cast<int>(index % d);
        index /= d;
    }
    return out;
}

// H_n = sum over translates of h, assembled from matrix elements <x|h_j|y>.
inline CMatrix chain_hamiltonian(const CMatrix& h, int d, int r, int n, bool periodic) {
    std::int64_t dim = 1;
    for (int i = 0; i < n; ++i) dim *= d;
    CMatrix out = CMatrix::Zero(dim, dim);
    const int terms = periodic ? n : n - r + 1;
    for (std::int64_t x = 0; x < dim; ++x) {
        const auto dx = digits(x, d, n);
        for (std::int64_t y = 0; y < dim; ++y) {
            const auto dy = digits(y, d, n);
            for (int j = 0; j < terms; ++j) {
                std::vector<bool> inside(static_cast<std::size_t>(n), false);
                int row = 0, col = 0;
                for (int k = 0; k < r; ++k) {
                    const int site = (j + k) % n;
                    inside[static_cast<std::size_t>(site)] = true;
                    row = row * d + dx[static_cast<std::size_t>(site)];
                    col = col * d + dy[static_cast<std::size_t>(site)];
                }
                bool same_outside = true;
                for (int s = 0; s < n; ++s) {
                    if (!inside[static_cast<std::size_t>(s)] && dx[static_cast<std::size_t>(s)] != dy[static_cast<std::size_t>(s)]) {
                        same_outside = false;
                        break;
                    }
                }
                if (same_outside) out(x, y) += h(row, col);
            }
        }
    }
    return out;
}

// log Z of a classical nearest-neighbour chain by enumerating configurations.
inline double classical_log_z(const std::vector<std::vector<double>>& phi, const std::vector<std::vector<int>>& allowed,
                              int n, bool periodic, double beta) {
    const int s = static_cast<int>(phi.size());
    std::int64_t count = 1;
    for (int i = 0; i < n; ++i) count *= s;
    std::vector<double> energies;
    for (std::int64_t w = 0; w < count; ++w) {
        const auto x = digits(w, s, n);
        double e = 0.0;
        bool ok = true;
        const int bonds = periodic ? n : n - 1;
        for (int i = 0; i < bonds && ok; ++i) {
            const int a = x[static_cast<std::size_t>(i)], b = x[static_cast<std::size_t>((i + 1) % n)];
            ok = allowed[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] != 0;
            e += phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
        if (ok) energies.push_back(beta * e);
    }
    return log_sum_exp_neg(energies);
}

// All eps in {-1,0,1}^K with sum eps_k n_k = n.
inline std::vector<std::vector<int>> riesz_representations(const std::vector<std::int64_t>& freqs, std::int64_t n) {
    std::vector<std::vector<int>> out;
    const std::size_t k = freqs.size();
    std::int64_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= 3;
    for (std::int64_t code = 0; code < total; ++code) {
        std::vector<int> eps(k);
        std::int64_t c = code, sum = 0;
        for (std::size_t i = 0; i < k; ++i) {
            eps[i] = static_cast<int>(c % 3) - 1;
            c /= 3;
            sum += eps[i] * freqs[i];
        }
        if (sum == n) out.push_back(eps);
    }
    return out;
}

// Spectral radius of a nonnegative matrix as the largest |eigenvalue|.
inline double spectral_radius(const RMatrix& m) {
    Eigen::EigenSolver<RMatrix> es(m);
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace oracle
