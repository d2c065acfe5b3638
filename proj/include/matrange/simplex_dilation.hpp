#ifndef MATRANGE_SIMPLEX_DILATION_HPP
#define MATRANGE_SIMPLEX_DILATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "matrange/essential_model.hpp"
#include "matrange/herm_core.hpp"
#include "matrange/norm_witness.hpp"
#include "matrange/simplex.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange {

/// Positive operators Q_1..Q_{m+1} summing to the identity.
struct Povm {
  static constexpr double kTol = 1e-9;
  std::vector<CMatrix> elements;

  Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
  /// Smallest eigenvalue over all elements.
  double min_eigenvalue() const;
  double completeness_error() const;
  bool valid(double tol = kTol) const { return min_eigenvalue() >= -tol && completeness_error() <= tol; }
};

/// Q_k = α_k0 I + Σ_j α_kj T_j from the barycentric coordinates of s. The
/// elements sum to I by construction and are all PSD exactly when W(T) ⊆ s.
/// Throws NotInSimplex (most negative eigenvalue, vertex index) otherwise.
Povm barycentric_povm(const HermTuple& t, const Simplex& s);

/// X = Σ_k Q_k^{1/2} ⊗ e_k : C^n → C^n ⊗ C^{m+1}; then X*X = Σ Q_k and
/// X*(I ⊗ D_j)X = Σ_k v_jk Q_k.
Isometry naimark_dilate(const Povm& q);

/// max_j ‖X*(I ⊗ D_j)X − T_j‖ for the simplex's diagonal tuple D.
double dilation_residual(const Isometry& x, const HermTuple& t, const Simplex& s);

struct SimplexNormBound {
  double bound = 0.0;  // max over vertices
  double lhs = 0.0;    // pencil_norm(R, T)
  bool holds = true;
};

/// Requires W(T) ⊆ s (throws NotInSimplex).
SimplexNormBound simplex_norm_bound(const NormTestTuple& r, const HermTuple& t, const Simplex& s);

struct ProbeFailure {
  int probe = -1;
  std::string reason;
};

struct PreservationReport {
  bool passed = false;
  bool precondition_ok = false;
  int vertices_checked = 0;
  int probes_checked = 0;
  int norm_trials = 0;
  double worst_realization_residual = 0.0;
  double worst_norm_excess = -1.0;  // max lhs − bound over trials
  std::vector<ProbeFailure> failures;
};

struct PreservationOptions {
  int probes = 50;
  int norm_trials = 20;
  std::uint64_t seed = 0;
  MembershipOptions membership;
};

/// Checks that W_ess of the model is the simplex s, applies the preserving
/// perturbation, and confirms for random probes B ∈ W^q(M) (images of random
/// UCP maps) that B ∈ W^q(A + K), that B is realized as a compression of the
/// body, and that the vertex norm bound holds for random R.
PreservationReport simplex_preservation_check(const BlockRepetitionModel& model, const Simplex& s, Eigen::Index q,
                                              const PreservationOptions& opts = {});

}  // namespace matrange

#endif  // MATRANGE_SIMPLEX_DILATION_HPP
