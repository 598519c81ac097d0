#pragma once

// Thin LAPACK wrappers for dense Hermitian eigenproblems. Real input takes the
// dsyevd path, complex input zheevd; the semantics are identical.

#include "thermo/algebra.hpp"

namespace thermo::spectral {

struct Decomposition {
    RVector values;  // ascending
    CMatrix vectors;
};

/// Eigenvalues of a Hermitian matrix (hermiticity is the caller's contract).
RVector eigenvalues(const CMatrix& m);
RVector eigenvalues(const RMatrix& m);

Decomposition decompose(const CMatrix& m);

}  // namespace thermo::spectral
