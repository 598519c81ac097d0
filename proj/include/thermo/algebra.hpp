#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace thermo {

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Entrywise tolerance for deciding hermiticity. Inputs outside it are
/// rejected, never symmetrized.
inline constexpr double kHermitianTolerance = 1e-13;

bool is_hermitian(const CMatrix& m, double tol = kHermitianTolerance);
bool is_real(const CMatrix& m);
bool is_diagonal(const CMatrix& m);

/// Direct sum M_{d_1} + ... + M_{d_m} with the canonical (unnormalized) trace.
class FiniteDimAlgebra {
public:
    explicit FiniteDimAlgebra(std::vector<int> block_dims);

    /// Full matrix algebra M_d.
    static FiniteDimAlgebra matrix(int d) { return FiniteDimAlgebra({d}); }

    const std::vector<int>& block_dims() const noexcept { return block_dims_; }
    int num_blocks() const noexcept { return static_cast<int>(block_dims_.size()); }

    /// Complex dimension, sum of d_i^2.
    std::size_t dimension() const noexcept;
    /// Trace of the identity, sum of d_i.
    std::size_t rank() const noexcept;

    bool operator==(const FiniteDimAlgebra&) const = default;

private:
    std::vector<int> block_dims_;
};

class AlgebraElement {
public:
    AlgebraElement(FiniteDimAlgebra parent, std::vector<CMatrix> blocks);

    /// Single-block element of M_d.
    explicit AlgebraElement(CMatrix m);

    static AlgebraElement zero(const FiniteDimAlgebra& a);
    static AlgebraElement identity(const FiniteDimAlgebra& a);

    const FiniteDimAlgebra& parent() const noexcept { return parent_; }
    const std::vector<CMatrix>& blocks() const noexcept { return blocks_; }
    const CMatrix& block(int i) const { return blocks_.at(static_cast<std::size_t>(i)); }

    /// The only block of an element of a full matrix algebra.
    const CMatrix& matrix() const;

    bool hermitian() const noexcept { return hermitian_; }

    AlgebraElement adjoint() const;

    AlgebraElement& operator+=(const AlgebraElement& other);
    AlgebraElement& operator-=(const AlgebraElement& other);
    AlgebraElement& operator*=(cplx s);

    friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
    friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
    friend AlgebraElement operator*(AlgebraElement a, cplx s) { return a *= s; }
    friend AlgebraElement operator*(cplx s, AlgebraElement a) { return a *= s; }
    friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b);

    /// a + c*1
    AlgebraElement shifted(double c) const;

private:
    void refresh_flag();

    FiniteDimAlgebra parent_;
    std::vector<CMatrix> blocks_;
    bool hermitian_ = false;
};

/// Places an operator on the window [lo, hi] of an n-site chain of
/// site_dim-dimensional spins.
struct SiteEmbedding {
    int n_sites = 1;
    int site_dim = 2;
    int lo = 0;
    int hi = 0;

    int width() const noexcept { return hi - lo + 1; }
};

struct HermitianSpectrum {
    std::vector<RVector> eigenvalues;  // ascending, per block
    std::vector<CMatrix> vectors;      // columns are eigenvectors, per block

    /// All eigenvalues of all blocks, ascending.
    RVector flattened() const;
};

cplx canonical_trace(const AlgebraElement& x);

/// Blockwise spectral decomposition. Throws NotHermitianError.
HermitianSpectrum herm_eig(const AlgebraElement& x);

/// Eigenvalues only, all blocks merged, ascending. Throws NotHermitianError.
RVector herm_eigenvalues(const AlgebraElement& x);

/// e^{scale * x}. Throws NotHermitianError.
AlgebraElement herm_exp(const AlgebraElement& x, double scale);

/// log Tr e^{-x}, shifted by the smallest eigenvalue before exponentiating.
double log_trace_exp(const AlgebraElement& x);

/// log sum_i e^{-e_i}, evaluated as -min(e) + log sum e^{-(e_i - min e)}.
double log_sum_exp_neg(const RVector& energies);

double op_norm(const AlgebraElement& x);
AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y);

/// Tensors identities on both sides of the window. Throws
/// DimensionMismatchError if x does not act on site_dim^width.
AlgebraElement embed(const AlgebraElement& x, const SiteEmbedding& emb);

/// Kronecker product of two dense matrices.
CMatrix kron(const CMatrix& a, const CMatrix& b);

}  // namespace thermo
