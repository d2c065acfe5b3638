#include "matrange/simplex.hpp"

namespace matrange {

Simplex::Simplex(RMatrix vertices) : vertices_(std::move(vertices)) {
  const Eigen::Index m = vertices_.rows();
  if (m < 1 || vertices_.cols() != m + 1)
    throw DimensionError("Simplex: need m+1 vertices in R^m (got " + std::to_string(vertices_.cols()) +
                         " points of dimension " + std::to_string(m) + ")");
  RMatrix lifted(m + 1, m + 1);
  lifted.col(0).setOnes();
  lifted.rightCols(m) = vertices_.transpose();
  Eigen::JacobiSVD<RMatrix> svd(lifted);
  const RVector& s = svd.singularValues();
  if (!(s(m) > 0.0) || s(0) / s(m) > kMaxCondition)
    throw DimensionError("Simplex: vertices are affinely dependent");
  alpha_ = lifted.transpose().inverse();
}

Simplex Simplex::from_points(const std::vector<std::vector<double>>& points) {
  if (points.empty()) throw DimensionError("Simplex: no vertices");
  const Eigen::Index m = static_cast<Eigen::Index>(points.front().size());
  RMatrix v(m, static_cast<Eigen::Index>(points.size()));
  for (std::size_t k = 0; k < points.size(); ++k) {
    if (static_cast<Eigen::Index>(points[k].size()) != m)
      throw DimensionError("Simplex: vertex " + std::to_string(k) + " has the wrong dimension");
    for (Eigen::Index j = 0; j < m; ++j) v(j, static_cast<Eigen::Index>(k)) = points[k][j];
  }
  return Simplex(std::move(v));
}

Simplex Simplex::standard(int m) {
  RMatrix v = RMatrix::Zero(m, m + 1);
  v.rightCols(m).setIdentity();
  return Simplex(std::move(v));
}

RVector Simplex::barycentric(const RVector& x) const {
  RVector lifted(x.size() + 1);
  lifted(0) = 1.0;
  lifted.tail(x.size()) = x;
  return alpha_ * lifted;
}

HermTuple Simplex::diagonal_tuple() const {
  std::vector<CMatrix> d;
  for (int j = 0; j < m(); ++j) d.push_back(vertices_.row(j).transpose().cast<Complex>().asDiagonal());
  return HermTuple(std::move(d));
}

}  // namespace matrange
