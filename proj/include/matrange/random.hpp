#ifndef MATRANGE_RANDOM_HPP
#define MATRANGE_RANDOM_HPP

#include <cstdint>
#include <random>

#include "matrange/herm_core.hpp"

namespace matrange {

using Rng = std::mt19937_64;

/// Independent stream for item `index` of a run seeded with `seed`, so loops
/// produce the same values regardless of evaluation order.
Rng substream(std::uint64_t seed, std::uint64_t index);

/// Entries with independent standard normal real and imaginary parts.
CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng);
RVector gaussian_vector(Eigen::Index n, Rng& rng);

/// Hermitian matrix from the GUE-like ensemble, scaled to spectral norm `scale`.
CMatrix random_hermitian(Eigen::Index n, Rng& rng, double scale = 1.0);
HermTuple random_tuple(std::size_t m, Eigen::Index n, Rng& rng, double scale = 1.0);

/// Haar-distributed unitary (QR of a Gaussian matrix with phase fix).
CMatrix random_unitary(Eigen::Index n, Rng& rng);

/// Orthonormalized Gaussian rows x cols matrix.
Isometry random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng);

double uniform(double lo, double hi, Rng& rng);

}  // namespace matrange

#endif  // MATRANGE_RANDOM_HPP
