#ifndef MATRANGE_UCP_CHOI_HPP
#define MATRANGE_UCP_CHOI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrange/herm_core.hpp"
#include "matrange/norm_witness.hpp"
#include "matrange/random.hpp"

namespace matrange {

/// Choi matrix J = Σ_kl E_kl ⊗ Φ(E_kl) of a linear map Φ: M_d → M_q.
/// Block (k, l) of size q holds Φ(E_kl); the input index is the outer one.
class ChoiMatrix {
 public:
  static constexpr double kPsdTol = 1e-9;
  static constexpr double kUnitalTol = 1e-8;

  ChoiMatrix() = default;
  ChoiMatrix(Eigen::Index d_in, Eigen::Index q_out, CMatrix j);

  Eigen::Index d_in() const { return d_in_; }
  Eigen::Index q_out() const { return q_out_; }
  const CMatrix& matrix() const { return j_; }
  auto block(Eigen::Index k, Eigen::Index l) const { return j_.block(k * q_out_, l * q_out_, q_out_, q_out_); }

  /// Φ(I) = Σ_k block(k, k).
  CMatrix image_of_identity() const;
  double min_eigenvalue() const;
  double unitality_error() const;
  bool is_cp(double tol = kPsdTol) const { return min_eigenvalue() >= -tol; }
  bool is_ucp(double psd_tol = kPsdTol, double unital_tol = kUnitalTol) const {
    return is_cp(psd_tol) && unitality_error() <= unital_tol;
  }

 private:
  Eigen::Index d_in_ = 0;
  Eigen::Index q_out_ = 0;
  CMatrix j_;
};

/// Φ(T) = Σ_kl T_kl · block(k, l).
CMatrix apply_choi(const ChoiMatrix& phi, const CMatrix& t);
HermTuple apply_choi(const ChoiMatrix& phi, const HermTuple& t);

ChoiMatrix choi_identity(Eigen::Index d);
/// T ↦ (tr T / d) I_q.
ChoiMatrix choi_trace_map(Eigen::Index d, Eigen::Index q);
/// T ↦ Σ_i K_i* T K_i for d x q matrices K_i.
ChoiMatrix choi_from_kraus(const std::vector<CMatrix>& kraus);
/// T ↦ X* T X.
ChoiMatrix choi_of_compression(const CMatrix& x);
/// T ↦ I_p ⊗ Φ(T).
ChoiMatrix ampliate_choi(const ChoiMatrix& phi, Eigen::Index p);
/// Random UCP map M_d → M_q with `rank` Kraus operators (a Stinespring
/// isometry drawn from random_isometry).
ChoiMatrix random_ucp_choi(Eigen::Index d, Eigen::Index q, Eigen::Index rank, Rng& rng);

/// Kraus operators K_i (d_in x q_out) with Φ(T) = Σ K_i* T K_i, from the
/// eigendecomposition of J with eigenvalues ≤ 1e-10 dropped. Throws
/// CertificateError when J has an eigenvalue below −ChoiMatrix::kPsdTol.
std::vector<CMatrix> kraus_decomposition(const ChoiMatrix& phi);

struct CertificateCheck {
  double residual = 0.0;        // max_j ‖Φ(A_j) − B_j‖
  double min_eigenvalue = 0.0;  // of J
  double unitality_error = 0.0;
};

CertificateCheck verify_certificate(const ChoiMatrix& phi, const HermTuple& a, const HermTuple& b);

enum class Status { Member, NotMember, Inconclusive };

std::string to_string(Status s);
Status status_from_string(const std::string& s);

struct MembershipOptions {
  int max_iter = 5000;
  double gap_tol = 1e-6;
  double member_tol = 1e-7;
  int witness_budget = 20000;
  int witness_restarts = 50;
  std::uint64_t seed = 0;
};

struct MembershipVerdict {
  Status status = Status::Inconclusive;
  /// Final distance between the PSD and affine iterates.
  double gap = 0.0;
  int iterations = 0;
  std::optional<ChoiMatrix> certificate;
  std::optional<Witness> witness;
  /// For Member: max_j ‖Φ(A_j) − B_j‖ of the certificate.
  double residual = 0.0;
};

/// Decides B ∈ W^q(A) with Dykstra's alternating projections between the PSD
/// cone and the affine set of unital Choi matrices mapping A to B. A converged
/// point is turned into an exact certificate; a persistent gap triggers a
/// norm-witness search seeded by the separating direction.
MembershipVerdict membership(const HermTuple& b, const HermTuple& a, const MembershipOptions& opts = {});

/// Σ_i L_i* B^{(i)} L_i componentwise. Requires Σ L_i* L_i = I within 1e-8.
HermTuple cstar_combine(const std::vector<HermTuple>& tuples, const std::vector<CMatrix>& l);

/// Random operator coefficients with Σ L_i* L_i = I (blocks of an isometry).
std::vector<CMatrix> random_cstar_coefficients(std::size_t count, Eigen::Index q, Rng& rng);

}  // namespace matrange

#endif  // MATRANGE_UCP_CHOI_HPP
