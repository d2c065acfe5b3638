#include "matrange/random.hpp"

namespace matrange {

Rng substream(std::uint64_t seed, std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                    0x6d72u};
  return Rng(seq);
}

CMatrix gaussian_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  CMatrix g(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = n(rng);
      const double im = n(rng);
      g(i, j) = Complex(re, im);
    }
  return g;
}

RVector gaussian_vector(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> dist(0.0, 1.0);
  RVector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
  return v;
}

CMatrix random_hermitian(Eigen::Index n, Rng& rng, double scale) {
  CMatrix h = hermitian_part(gaussian_matrix(n, n, rng));
  const double nrm = spectral_norm(h);
  if (nrm > 0.0) h *= scale / nrm;
  return h;
}

HermTuple random_tuple(std::size_t m, Eigen::Index n, Rng& rng, double scale) {
  std::vector<CMatrix> mats;
  mats.reserve(m);
  for (std::size_t j = 0; j < m; ++j) mats.push_back(random_hermitian(n, rng, scale));
  return HermTuple(std::move(mats));
}

CMatrix random_unitary(Eigen::Index n, Rng& rng) {
  return orthonormalize(gaussian_matrix(n, n, rng));
}

Isometry random_isometry(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (cols > rows) throw DimensionError("random_isometry: cols > rows");
  return Isometry(orthonormalize(gaussian_matrix(rows, cols, rng)));
}

double uniform(double lo, double hi, Rng& rng) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace matrange
