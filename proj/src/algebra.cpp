#include "thermo/algebra.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "thermo/errors.hpp"
#include "thermo/spectral.hpp"

namespace thermo {

bool is_hermitian(const CMatrix& m, double tol) {
    if (m.rows() != m.cols()) return false;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = j; i < m.rows(); ++i) {
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
        }
    }
    return true;
}

bool is_real(const CMatrix& m) {
    return (m.imag().array() == 0.0).all();
}

bool is_diagonal(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (i != j && m(i, j) != cplx{0.0, 0.0}) return false;
        }
    }
    return true;
}

FiniteDimAlgebra::FiniteDimAlgebra(std::vector<int> block_dims) : block_dims_(std::move(block_dims)) {
    if (block_dims_.empty()) {
        throw InvariantError("block_count", "a finite-dimensional algebra needs at least one block");
    }
    for (int d : block_dims_) {
        if (d < 1) throw InvariantError("block_dim", "block dimension " + std::to_string(d) + " < 1");
    }
}

std::size_t FiniteDimAlgebra::dimension() const noexcept {
    std::size_t total = 0;
    for (int d : block_dims_) total += static_cast<std::size_t>(d) * static_cast<std::size_t>(d);
    return total;
}

std::size_t FiniteDimAlgebra::rank() const noexcept {
    std::size_t total = 0;
    for (int d : block_dims_) total += static_cast<std::size_t>(d);
    return total;
}

RVector HermitianSpectrum::flattened() const {
    Eigen::Index total = 0;
    for (const auto& e : eigenvalues) total += e.size();
    RVector out(total);
    Eigen::Index at = 0;
    for (const auto& e : eigenvalues) {
        out.segment(at, e.size()) = e;
        at += e.size();
    }
    std::sort(out.data(), out.data() + out.size());
    return out;
}

AlgebraElement::AlgebraElement(FiniteDimAlgebra parent, std::vector<CMatrix> blocks)
    : parent_(std::move(parent)), blocks_(std::move(blocks)) {
    if (blocks_.size() != parent_.block_dims().size()) {
        throw DimensionMismatchError("element has " + std::to_string(blocks_.size()) +
                                     " blocks, algebra has " +
                                     std::to_string(parent_.block_dims().size()));
    }
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        const int d = parent_.block_dims()[i];
        if (blocks_[i].rows() != d || blocks_[i].cols() != d) {
            throw DimensionMismatchError("block " + std::to_string(i) + " is not " +
                                         std::to_string(d) + "x" + std::to_string(d));
        }
    }
    refresh_flag();
}

namespace {

std::vector<CMatrix> single_block(CMatrix m) {
    std::vector<CMatrix> blocks;
    blocks.push_back(std::move(m));
    return blocks;
}

}  // namespace

AlgebraElement::AlgebraElement(CMatrix m)
    : AlgebraElement(FiniteDimAlgebra::matrix(static_cast<int>(m.rows())), single_block(m)) {}

AlgebraElement AlgebraElement::zero(const FiniteDimAlgebra& a) {
    std::vector<CMatrix> blocks;
    for (int d : a.block_dims()) blocks.push_back(CMatrix::Zero(d, d));
    return AlgebraElement(a, std::move(blocks));
}

AlgebraElement AlgebraElement::identity(const FiniteDimAlgebra& a) {
    std::vector<CMatrix> blocks;
    for (int d : a.block_dims()) blocks.push_back(CMatrix::Identity(d, d));
    return AlgebraElement(a, std::move(blocks));
}

const CMatrix& AlgebraElement::matrix() const {
    if (blocks_.size() != 1) {
        throw DimensionMismatchError("matrix() requires a single-block element");
    }
    return blocks_.front();
}

void AlgebraElement::refresh_flag() {
    hermitian_ = std::all_of(blocks_.begin(), blocks_.end(),
                             [](const CMatrix& b) { return is_hermitian(b); });
}

AlgebraElement AlgebraElement::adjoint() const {
    std::vector<CMatrix> blocks;
    blocks.reserve(blocks_.size());
    for (const auto& b : blocks_) blocks.push_back(b.adjoint());
    return AlgebraElement(parent_, std::move(blocks));
}

namespace {

void require_same_parent(const AlgebraElement& a, const AlgebraElement& b) {
    if (!(a.parent() == b.parent())) {
        throw DimensionMismatchError("elements belong to different algebras");
    }
}

void require_hermitian(const AlgebraElement& x, const char* op) {
    if (!x.hermitian()) throw NotHermitianError(std::string(op) + " requires a hermitian element");
}

}  // namespace

AlgebraElement& AlgebraElement::operator+=(const AlgebraElement& other) {
    require_same_parent(*this, other);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] += other.blocks_[i];
    refresh_flag();
    return *this;
}

AlgebraElement& AlgebraElement::operator-=(const AlgebraElement& other) {
    require_same_parent(*this, other);
    for (std::size_t i = 0; i < blocks_.size(); ++i) blocks_[i] -= other.blocks_[i];
    refresh_flag();
    return *this;
}

AlgebraElement& AlgebraElement::operator*=(cplx s) {
    for (auto& b : blocks_) b *= s;
    refresh_flag();
    return *this;
}

AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    require_same_parent(a, b);
    std::vector<CMatrix> blocks;
    blocks.reserve(a.blocks().size());
    for (std::size_t i = 0; i < a.blocks().size(); ++i) blocks.push_back(a.blocks()[i] * b.blocks()[i]);
    return AlgebraElement(a.parent(), std::move(blocks));
}

AlgebraElement AlgebraElement::shifted(double c) const {
    return *this + AlgebraElement::identity(parent_) * cplx{c, 0.0};
}

cplx canonical_trace(const AlgebraElement& x) {
    cplx t{0.0, 0.0};
    for (const auto& b : x.blocks()) t += b.trace();
    return t;
}

HermitianSpectrum herm_eig(const AlgebraElement& x) {
    require_hermitian(x, "herm_eig");
    HermitianSpectrum s;
    for (const auto& b : x.blocks()) {
        auto dec = spectral::decompose(b);
        s.eigenvalues.push_back(std::move(dec.values));
        s.vectors.push_back(std::move(dec.vectors));
    }
    return s;
}

RVector herm_eigenvalues(const AlgebraElement& x) {
    require_hermitian(x, "herm_eigenvalues");
    HermitianSpectrum s;
    for (const auto& b : x.blocks()) s.eigenvalues.push_back(spectral::eigenvalues(b));
    return s.flattened();
}

AlgebraElement herm_exp(const AlgebraElement& x, double scale) {
    require_hermitian(x, "herm_exp");
    std::vector<CMatrix> blocks;
    for (const auto& b : x.blocks()) {
        const auto dec = spectral::decompose(b);
        const RVector w = (scale * dec.values).array().exp();
        CMatrix e = dec.vectors * w.cast<cplx>().asDiagonal() * dec.vectors.adjoint();
        // Restore exact hermiticity lost to rounding in the product above.
        e = (0.5 * (e + e.adjoint())).eval();
        blocks.push_back(std::move(e));
    }
    return AlgebraElement(x.parent(), std::move(blocks));
}

double log_sum_exp_neg(const RVector& energies) {
    if (energies.size() == 0) throw DimensionMismatchError("log_sum_exp_neg of an empty spectrum");
    const double lo = energies.minCoeff();
    if (!std::isfinite(lo)) throw Error("log_sum_exp_neg: non-finite minimum energy");
    double sum = 0.0;
    for (Eigen::Index i = 0; i < energies.size(); ++i) sum += std::exp(-(energies[i] - lo));
    return -lo + std::log(sum);
}

double log_trace_exp(const AlgebraElement& x) {
    return log_sum_exp_neg(herm_eigenvalues(x));
}

double op_norm(const AlgebraElement& x) {
    double best = 0.0;
    for (const auto& b : x.blocks()) {
        if (b.size() == 0) continue;
        if (is_hermitian(b)) {
            const RVector w = spectral::eigenvalues(b);
            best = std::max({best, std::abs(w[0]), std::abs(w[w.size() - 1])});
        } else {
            Eigen::JacobiSVD<CMatrix> svd(b);
            best = std::max(best, svd.singularValues()[0]);
        }
    }
    return best;
}

AlgebraElement commutator(const AlgebraElement& x, const AlgebraElement& y) {
    return x * y - y * x;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

AlgebraElement embed(const AlgebraElement& x, const SiteEmbedding& emb) {
    if (emb.n_sites < 1 || emb.site_dim < 1 || emb.lo < 0 || emb.hi < emb.lo || emb.hi >= emb.n_sites) {
        throw DimensionMismatchError("embedding window [" + std::to_string(emb.lo) + ", " +
                                     std::to_string(emb.hi) + "] outside a " +
                                     std::to_string(emb.n_sites) + "-site chain");
    }
    const CMatrix& local = x.matrix();
    Eigen::Index local_dim = 1;
    for (int i = 0; i < emb.width(); ++i) local_dim *= emb.site_dim;
    if (local.rows() != local_dim) {
        throw DimensionMismatchError("operator of dimension " + std::to_string(local.rows()) +
                                     " does not act on " + std::to_string(emb.width()) + " sites of dimension " +
                                     std::to_string(emb.site_dim));
    }
    Eigen::Index left = 1, right = 1;
    for (int i = 0; i < emb.lo; ++i) left *= emb.site_dim;
    for (int i = emb.hi + 1; i < emb.n_sites; ++i) right *= emb.site_dim;
    CMatrix out = kron(kron(CMatrix::Identity(left, left), local), CMatrix::Identity(right, right));
    return AlgebraElement(std::move(out));
}

}  // namespace thermo
