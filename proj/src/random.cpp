#include "thermo/random.hpp"

namespace thermo {

CMatrix random_matrix(Eigen::Index dim, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    CMatrix m(dim, dim);
    for (Eigen::Index j = 0; j < dim; ++j) {
        for (Eigen::Index i = 0; i < dim; ++i) {
            const double re = normal(rng);
            const double im = normal(rng);
            m(i, j) = {re, im};
        }
    }
    return m;
}

CMatrix random_hermitian(Eigen::Index dim, Rng& rng, double scale) {
    const CMatrix x = random_matrix(dim, rng);
    CMatrix h = (0.5 * scale) * (x + x.adjoint());
    for (Eigen::Index i = 0; i < dim; ++i) h(i, i) = h(i, i).real();
    return h;
}

CMatrix random_real_symmetric(Eigen::Index dim, Rng& rng, double scale) {
    CMatrix h = random_hermitian(dim, rng, scale);
    return h.real().cast<cplx>();
}

CMatrix random_density(Eigen::Index dim, Rng& rng) {
    const CMatrix x = random_matrix(dim, rng);
    CMatrix rho = x * x.adjoint();
    rho /= rho.trace().real();
    rho = (0.5 * (rho + rho.adjoint())).eval();
    return rho;
}

}  // namespace thermo
