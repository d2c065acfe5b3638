#include "matrange/herm_vec.hpp"

#include <cmath>

namespace matrange {

RVector herm_to_vec(const CMatrix& h) {
  const Eigen::Index n = h.rows();
  RVector v(n * n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(idx++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex z = 0.5 * (h(i, j) + std::conj(h(j, i)));
      v(idx++) = M_SQRT2 * z.real();
      v(idx++) = M_SQRT2 * z.imag();
    }
  return v;
}

CMatrix vec_to_herm(const Eigen::Ref<const RVector>& v, Eigen::Index n) {
  if (v.size() != n * n) throw DimensionError("vec_to_herm: length mismatch");
  CMatrix h(n, n);
  Eigen::Index idx = 0;
  for (Eigen::Index i = 0; i < n; ++i) h(i, i) = v(idx++);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Complex z(v(idx) * M_SQRT1_2, v(idx + 1) * M_SQRT1_2);
      idx += 2;
      h(i, j) = z;
      h(j, i) = std::conj(z);
    }
  return h;
}

}  // namespace matrange
