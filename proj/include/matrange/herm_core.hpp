#ifndef MATRANGE_HERM_CORE_HPP
#define MATRANGE_HERM_CORE_HPP

#include <cmath>
#include <cstddef>
#include <vector>

#include "matrange/types.hpp"

namespace matrange {

/// Kronecker product a ⊗ b; the row index of the result is (i_a, i_b) with i_a outer.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, Eigen::Dynamic, Eigen::Dynamic> kron(
    const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar = typename DerivedA::Scalar;
  const Eigen::Index br = b.rows(), bc = b.cols();
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(a.rows() * br, a.cols() * bc);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
  return out;
}

/// (a + a*) / 2.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> hermitian_part(
    const Eigen::MatrixBase<Derived>& a) {
  return (a + a.adjoint()) / typename Derived::Scalar(2);
}

/// Largest singular value. Computed as sqrt(λ_max(a* a)) on the smaller Gram
/// side, which keeps relative accuracy near machine precision for the top value.
template <typename Derived>
double spectral_norm(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.size() == 0) return 0.0;
  Mat gram = a.rows() >= a.cols() ? Mat(a.adjoint() * a) : Mat(a * a.adjoint());
  if (gram.rows() == 1) return std::sqrt(std::abs(gram(0, 0)));
  Eigen::SelfAdjointEigenSolver<Mat> es(gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) {
    Eigen::JacobiSVD<Mat> svd(a);
    return svd.singularValues()(0);
  }
  return std::sqrt(std::max(0.0, static_cast<double>(es.eigenvalues()(es.eigenvalues().size() - 1))));
}

struct HermEig {
  RVector values;   // ascending
  CMatrix vectors;  // columns are eigenvectors
};

/// Eigendecomposition of a Hermitian matrix. Only the lower triangle is read.
/// Throws SolverError if the QR iteration fails to converge.
HermEig herm_eig(const CMatrix& a);

double min_eigenvalue(const CMatrix& a);
double max_eigenvalue(const CMatrix& a);

/// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped to zero).
CMatrix psd_project(const CMatrix& a);

/// Principal square root of a PSD matrix; eigenvalues below zero are clipped.
CMatrix psd_sqrt(const CMatrix& a);

/// Inverse square root of a positive definite matrix.
CMatrix pd_inv_sqrt(const CMatrix& a);

/// Block diagonal matrix a ⊕ b.
CMatrix direct_sum(const CMatrix& a, const CMatrix& b);

/// An m-tuple of Hermitian matrices of a common dimension. Inputs are
/// symmetrized on construction.
class HermTuple {
 public:
  HermTuple() = default;
  explicit HermTuple(std::vector<CMatrix> mats);

  std::size_t size() const { return mats_.size(); }
  Eigen::Index dim() const { return mats_.empty() ? 0 : mats_.front().rows(); }
  bool empty() const { return mats_.empty(); }

  const CMatrix& operator[](std::size_t j) const { return mats_[j]; }
  const std::vector<CMatrix>& mats() const { return mats_; }
  auto begin() const { return mats_.begin(); }
  auto end() const { return mats_.end(); }

  /// Tuple of 1x1 matrices from real coordinates.
  static HermTuple scalars(const std::vector<double>& values);

 private:
  std::vector<CMatrix> mats_;
};

/// Coefficients (R_0, R_1, ..., R_m) of the pencil R_0 ⊗ I + Σ R_j ⊗ T_j.
struct NormTestTuple {
  std::vector<CMatrix> coeffs;

  NormTestTuple() = default;
  explicit NormTestTuple(std::vector<CMatrix> c);

  Eigen::Index q() const { return coeffs.empty() ? 0 : coeffs.front().rows(); }
  /// Number of non-identity terms m.
  std::size_t m() const { return coeffs.empty() ? 0 : coeffs.size() - 1; }

  NormTestTuple scaled(double c) const;
  /// R = (I_q, 0, ..., 0).
  static NormTestTuple identity(Eigen::Index q, std::size_t m);
};

/// A rows x cols matrix with orthonormal columns.
class Isometry {
 public:
  Isometry() = default;
  /// Validates ‖X*X − I‖ ≤ tol; throws DimensionError otherwise.
  explicit Isometry(CMatrix x, double tol = 1e-10);

  const CMatrix& matrix() const { return x_; }
  Eigen::Index rows() const { return x_.rows(); }
  Eigen::Index cols() const { return x_.cols(); }

  /// (X* T_1 X, ..., X* T_m X).
  HermTuple compress(const HermTuple& t) const;
  double orthonormality_error() const;

 private:
  CMatrix x_;
};

/// Orthonormalizes the columns of x (thin QR), fixing column phases so that
/// R has a positive diagonal.
CMatrix orthonormalize(const CMatrix& x);

/// ‖R_0 ⊗ I_dim + Σ_j R_j ⊗ T_j‖.
double pencil_norm(const NormTestTuple& r, const HermTuple& t);

/// The pencil matrix itself.
CMatrix pencil_matrix(const NormTestTuple& r, const HermTuple& t);

/// max_j ‖a_j − b_j‖ (spectral).
double tuple_distance(const HermTuple& a, const HermTuple& b);

/// (U* T_1 U, ..., U* T_m U) for a square unitary or any conformable matrix.
HermTuple conjugate(const HermTuple& t, const CMatrix& u);

/// Componentwise I_p ⊗ T_j.
HermTuple ampliate(const HermTuple& t, Eigen::Index p);

/// Componentwise direct sum.
HermTuple direct_sum(const HermTuple& a, const HermTuple& b);

}  // namespace matrange

#endif  // MATRANGE_HERM_CORE_HPP
