#ifndef MATRANGE_ESSENTIAL_MODEL_HPP
#define MATRANGE_ESSENTIAL_MODEL_HPP

#include <optional>
#include <vector>

#include "matrange/herm_core.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange {

/// A_j = F_j ⊕ (I_n ⊗ M_j): a finite head F followed by n copies of the body M.
///
/// The model stands in for an operator whose essential part is the infinitely
/// repeated body. Compact perturbations can only touch finitely many blocks,
/// so the essential norm of any pencil equals the single-block norm
/// ‖R_0 ⊗ I + Σ R_j ⊗ M_j‖, and the essential matricial range is W^q(M).
class BlockRepetitionModel {
 public:
  BlockRepetitionModel() = default;
  BlockRepetitionModel(std::optional<HermTuple> head, HermTuple body, int level);

  const std::optional<HermTuple>& head() const { return head_; }
  const HermTuple& body() const { return body_; }
  int level() const { return level_; }
  std::size_t m() const { return body_.size(); }
  Eigen::Index head_dim() const { return head_ ? head_->dim() : 0; }
  Eigen::Index body_dim() const { return body_.dim(); }
  Eigen::Index dim() const { return head_dim() + level_ * body_dim(); }
  /// Row offset of body block `block` (0-based) inside A(n).
  Eigen::Index body_offset(int block) const { return head_dim() + block * body_dim(); }

  BlockRepetitionModel with_level(int level) const { return {head_, body_, level}; }

  /// The truncated operator tuple A(n).
  HermTuple materialize() const;

 private:
  std::optional<HermTuple> head_;
  HermTuple body_;
  int level_ = 1;
};

/// Finite-rank self-adjoint perturbation supported on the head block.
struct PerturbationTuple {
  /// Head-block part Δ_j (h x h); absent for a model without head.
  std::optional<HermTuple> head_delta;
  int rank_bound = 0;

  /// K_j = Δ_j ⊕ 0 at the model's truncation level.
  HermTuple materialize(const BlockRepetitionModel& model) const;
};

/// The model with head F + Δ; materializing it gives A(n) + K.
BlockRepetitionModel apply_perturbation(const BlockRepetitionModel& model, const PerturbationTuple& k);

/// Essential norm of the pencil: pencil_norm(R, M).
double essential_pencil_norm(const BlockRepetitionModel& model, const NormTestTuple& r);

RefNormFn essential_reference(const BlockRepetitionModel& model);

/// B ∈ W^q_ess(A) = W^q(M), decided by the membership oracle against the body.
MembershipVerdict essential_membership(const HermTuple& b, const BlockRepetitionModel& model,
                                       const MembershipOptions& opts = {});

struct InteriorTest {
  bool independent = false;
  /// (a_0, ..., a_m) with a_0 I + Σ a_j M_j = 0, scaled so that its first
  /// largest-magnitude entry is +1. Present only when dependent.
  std::optional<RVector> witness;
  double ratio = 0.0;  // λ_min / λ_max of the trace Gram matrix
};

/// Linear independence of {I, M_1, ..., M_m} under the trace inner product:
/// independent iff λ_min(Gram) > 1e-10 λ_max(Gram).
InteriorTest interior_test(const BlockRepetitionModel& model);

/// Replaces the head by the leading h x h block of I_t ⊗ M (t = ⌈h/d⌉), so
/// A(n) + K is a compression-padded copy of I ⊗ M. When d divides h this is
/// exactly K_j = (I_{h/d} ⊗ M_j) − F_j.
PerturbationTuple preserving_perturbation(const BlockRepetitionModel& model);

}  // namespace matrange

#endif  // MATRANGE_ESSENTIAL_MODEL_HPP
