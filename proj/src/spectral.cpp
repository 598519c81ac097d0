#include "thermo/spectral.hpp"

#include <lapacke.h>

#include "thermo/errors.hpp"

namespace thermo::spectral {

namespace {

void check_info(lapack_int info, const char* routine) {
    if (info != 0) {
        throw ConvergenceError(std::string(routine) + " failed with info " + std::to_string(info));
    }
}

}  // namespace

RVector eigenvalues(const RMatrix& m) {
    const auto n = static_cast<lapack_int>(m.rows());
    RVector w(n);
    if (n == 0) return w;
    RMatrix a = m;
    check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, a.data(), n, w.data()), "dsyevd");
    return w;
}

RVector eigenvalues(const CMatrix& m) {
    if (is_real(m)) return eigenvalues(RMatrix(m.real()));
    const auto n = static_cast<lapack_int>(m.rows());
    RVector w(n);
    if (n == 0) return w;
    CMatrix a = m;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(a.data()), n, w.data()),
               "zheevd");
    return w;
}

Decomposition decompose(const CMatrix& m) {
    const auto n = static_cast<lapack_int>(m.rows());
    Decomposition out;
    out.values.resize(n);
    if (n == 0) return out;
    if (is_real(m)) {
        RMatrix a = m.real();
        check_info(LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, out.values.data()),
                   "dsyevd");
        out.vectors = a.cast<cplx>();
        return out;
    }
    out.vectors = m;
    check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n,
                              reinterpret_cast<lapack_complex_double*>(out.vectors.data()), n,
                              out.values.data()),
               "zheevd");
    return out;
}

}  // namespace thermo::spectral
