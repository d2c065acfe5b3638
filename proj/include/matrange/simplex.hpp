#ifndef MATRANGE_SIMPLEX_HPP
#define MATRANGE_SIMPLEX_HPP

#include <vector>

#include "matrange/herm_core.hpp"

namespace matrange {

/// m+1 affinely independent points in R^m. Column k of vertices() is v_k.
class Simplex {
 public:
  static constexpr double kMaxCondition = 1e10;

  Simplex() = default;
  /// Throws DimensionError when the vertex count is not m+1 or the vertices
  /// are affinely dependent (condition number of [1 v_k] above kMaxCondition).
  explicit Simplex(RMatrix vertices);
  static Simplex from_points(const std::vector<std::vector<double>>& points);
  /// The standard simplex {0, e_1, ..., e_m}.
  static Simplex standard(int m);

  int m() const { return static_cast<int>(vertices_.rows()); }
  const RMatrix& vertices() const { return vertices_; }
  RVector vertex(int k) const { return vertices_.col(k); }

  /// Row k holds (α_k0, α_k1, ..., α_km): λ_k(x) = α_k0 + Σ_j α_kj x_j.
  const RMatrix& barycentric_coefficients() const { return alpha_; }
  RVector barycentric(const RVector& x) const;

  /// D_j = diag(v_j1, ..., v_j,m+1), the diagonal tuple whose joint
  /// numerical range is this simplex.
  HermTuple diagonal_tuple() const;

 private:
  RMatrix vertices_;  // m x (m+1)
  RMatrix alpha_;     // (m+1) x (m+1)
};

}  // namespace matrange

#endif  // MATRANGE_SIMPLEX_HPP
