#include "matrange/herm_core.hpp"

#include <algorithm>
#include <cmath>

namespace matrange {

HermEig herm_eig(const CMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("herm_eig: matrix is not square");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a);
  if (es.info() != Eigen::Success) throw SolverError("herm_eig: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

double min_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("min_eigenvalue: eigensolver did not converge");
  return es.eigenvalues()(0);
}

double max_eigenvalue(const CMatrix& a) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw SolverError("max_eigenvalue: eigensolver did not converge");
  return es.eigenvalues()(es.eigenvalues().size() - 1);
}

CMatrix psd_project(const CMatrix& a) {
  const HermEig e = herm_eig(a);
  const RVector clipped = e.values.cwiseMax(0.0);
  return e.vectors * clipped.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

CMatrix psd_sqrt(const CMatrix& a) {
  const HermEig e = herm_eig(a);
  const RVector roots = e.values.cwiseMax(0.0).cwiseSqrt();
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

CMatrix pd_inv_sqrt(const CMatrix& a) {
  const HermEig e = herm_eig(a);
  if (e.values(0) <= 0.0) throw SolverError("pd_inv_sqrt: matrix is not positive definite");
  const RVector roots = e.values.cwiseSqrt().cwiseInverse();
  return e.vectors * roots.cast<Complex>().asDiagonal() * e.vectors.adjoint();
}

CMatrix direct_sum(const CMatrix& a, const CMatrix& b) {
  CMatrix out = CMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

HermTuple::HermTuple(std::vector<CMatrix> mats) : mats_(std::move(mats)) {
  if (mats_.empty()) throw DimensionError("HermTuple: tuple length must be at least 1");
  const Eigen::Index d = mats_.front().rows();
  if (d < 1) throw DimensionError("HermTuple: dimension must be at least 1");
  for (auto& a : mats_) {
    if (a.rows() != d || a.cols() != d)
      throw DimensionError("HermTuple: all members must be square of dimension " + std::to_string(d));
    a = hermitian_part(a);
  }
}

HermTuple HermTuple::scalars(const std::vector<double>& values) {
  std::vector<CMatrix> mats;
  mats.reserve(values.size());
  for (double v : values) mats.push_back(CMatrix::Constant(1, 1, Complex(v, 0.0)));
  return HermTuple(std::move(mats));
}

NormTestTuple::NormTestTuple(std::vector<CMatrix> c) : coeffs(std::move(c)) {
  if (coeffs.empty()) throw DimensionError("NormTestTuple: need at least R_0");
  const Eigen::Index q = coeffs.front().rows();
  for (const auto& r : coeffs)
    if (r.rows() != q || r.cols() != q)
      throw DimensionError("NormTestTuple: all coefficients must be " + std::to_string(q) + "x" +
                           std::to_string(q));
}

NormTestTuple NormTestTuple::scaled(double c) const {
  NormTestTuple out = *this;
  for (auto& r : out.coeffs) r *= c;
  return out;
}

NormTestTuple NormTestTuple::identity(Eigen::Index q, std::size_t m) {
  std::vector<CMatrix> c(m + 1, CMatrix::Zero(q, q));
  c[0] = CMatrix::Identity(q, q);
  return NormTestTuple(std::move(c));
}

Isometry::Isometry(CMatrix x, double tol) : x_(std::move(x)) {
  if (x_.cols() > x_.rows()) throw DimensionError("Isometry: more columns than rows");
  const double err = orthonormality_error();
  if (!(err <= tol))
    throw DimensionError("Isometry: columns are not orthonormal (error " + std::to_string(err) + ")");
}

double Isometry::orthonormality_error() const {
  if (x_.cols() == 0) return 0.0;
  return spectral_norm(x_.adjoint() * x_ - CMatrix::Identity(x_.cols(), x_.cols()));
}

HermTuple Isometry::compress(const HermTuple& t) const {
  return conjugate(t, x_);
}

CMatrix orthonormalize(const CMatrix& x) {
  Eigen::HouseholderQR<CMatrix> qr(x);
  CMatrix q = qr.householderQ() * CMatrix::Identity(x.rows(), x.cols());
  const CMatrix& r = qr.matrixQR();
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const Complex d = r(j, j);
    if (std::abs(d) > 0.0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

CMatrix pencil_matrix(const NormTestTuple& r, const HermTuple& t) {
  if (r.coeffs.size() != t.size() + 1)
    throw DimensionError("pencil: expected " + std::to_string(t.size() + 1) + " coefficients, got " +
                         std::to_string(r.coeffs.size()));
  const Eigen::Index d = t.dim();
  CMatrix p = kron(r.coeffs[0], CMatrix::Identity(d, d));
  for (std::size_t j = 0; j < t.size(); ++j) p += kron(r.coeffs[j + 1], t[j]);
  return p;
}

double pencil_norm(const NormTestTuple& r, const HermTuple& t) {
  return spectral_norm(pencil_matrix(r, t));
}

double tuple_distance(const HermTuple& a, const HermTuple& b) {
  if (a.size() != b.size() || a.dim() != b.dim()) throw DimensionError("tuple_distance: shape mismatch");
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) worst = std::max(worst, spectral_norm(a[j] - b[j]));
  return worst;
}

HermTuple conjugate(const HermTuple& t, const CMatrix& u) {
  if (u.rows() != t.dim()) throw DimensionError("conjugate: dimension mismatch");
  std::vector<CMatrix> out;
  out.reserve(t.size());
  for (const auto& a : t) out.push_back(u.adjoint() * a * u);
  return HermTuple(std::move(out));
}

HermTuple ampliate(const HermTuple& t, Eigen::Index p) {
  std::vector<CMatrix> out;
  out.reserve(t.size());
  for (const auto& a : t) out.push_back(kron(CMatrix::Identity(p, p), a));
  return HermTuple(std::move(out));
}

HermTuple direct_sum(const HermTuple& a, const HermTuple& b) {
  if (a.size() != b.size()) throw DimensionError("direct_sum: tuple length mismatch");
  std::vector<CMatrix> out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) out.push_back(direct_sum(a[j], b[j]));
  return HermTuple(std::move(out));
}

}  // namespace matrange
