#pragma once

#include <random>

#include "thermo/algebra.hpp"

namespace thermo {

using Rng = std::mt19937_64;

/// Entries with independent standard normal real and imaginary parts.
CMatrix random_matrix(Eigen::Index dim, Rng& rng);

/// (X + X^*) / 2 for X = random_matrix, scaled by `scale`.
CMatrix random_hermitian(Eigen::Index dim, Rng& rng, double scale = 1.0);

/// Real symmetric counterpart of random_hermitian.
CMatrix random_real_symmetric(Eigen::Index dim, Rng& rng, double scale = 1.0);

/// Full-rank density matrix X X^* / Tr(X X^*).
CMatrix random_density(Eigen::Index dim, Rng& rng);

}  // namespace thermo
