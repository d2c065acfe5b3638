#ifndef MATRANGE_SPATIAL_HPP
#define MATRANGE_SPATIAL_HPP

#include <cstdint>
#include <vector>

#include "matrange/essential_model.hpp"
#include "matrange/herm_core.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange {

struct CompressionSample {
  Isometry x;
  HermTuple values;  // X* A_j X
};

/// `count` compressions of a onto random q-dimensional subspaces
/// (orthonormalized Gaussian matrices); deterministic given the seed.
std::vector<CompressionSample> sample_compressions(const HermTuple& a, Eigen::Index q, int count,
                                                   std::uint64_t seed);

/// Stinespring realization of a certified member B ∈ W^q(M).
///
/// With Kraus operators K_1..K_r of Φ, the stacked matrix V = [K_1; ...; K_r]
/// is an isometry into r copies of C^d (copy index outer, matching the body
/// blocks of a BlockRepetitionModel), and V*(I_r ⊗ M_j)V = Φ(M_j) = B_j.
/// Throws CertificateError when Φ is not UCP within tolerance or does not
/// reproduce B within 1e-7.
Isometry realize_member(const HermTuple& b, const HermTuple& body, const ChoiMatrix& phi);

/// Copies of the body used by a realization.
inline int realization_blocks(const Isometry& v, const HermTuple& body) {
  return static_cast<int>(v.rows() / body.dim());
}

/// Places a realization (rows = r·d) into A(n), starting at body block `first_block`.
CMatrix embed_in_body(const BlockRepetitionModel& model, const Isometry& v, int first_block);

/// Orthonormal basis of span(columns) by modified Gram–Schmidt, dropping
/// directions whose residual norm falls below drop_tol.
CMatrix gram_schmidt(const CMatrix& columns, double drop_tol = 1e-12);

/// Unitary whose leading columns are x (orthonormal completion against the
/// standard basis).
CMatrix complete_to_unitary(const CMatrix& x, double drop_tol = 1e-12);

struct BlockCompression {
  Isometry z;
  /// Diagonal blocks B̃_i = Z_i* A Z_i.
  std::vector<HermTuple> blocks;
  /// max_j ‖B̃_ij − B_ij‖ per target.
  std::vector<double> deviations;
  /// Largest off-diagonal block norm ‖Z_i* A_j Z_k‖, i ≠ k.
  double off_diagonal = 0.0;
  /// Largest ‖Y* X_1‖ and ‖Y* A_j X_1‖ seen across induction stages.
  double stage_orthogonality = 0.0;
  int blocks_used = 0;
};

/// Builds Z with Z* A_j Z = ⊕_i B̃_ij and ‖B̃_ij − B_ij‖ ≤ eps, one target at
/// a time: realize target i on fresh body blocks, extend the isometry built so
/// far to a unitary U, and place the next target in the complement of
/// span{K_1, U*A_jU K_1}, where it couples to nothing already placed.
/// Targets must be essential members (checked with the oracle). Throws
/// TruncationTooSmall with the required level when the body has too few copies.
BlockCompression block_compress(const BlockRepetitionModel& model, const std::vector<HermTuple>& targets,
                                double eps, const MembershipOptions& opts = {});

/// block_compress, doubling the truncation level until it fits.
BlockCompression block_compress_growing(BlockRepetitionModel& model, const std::vector<HermTuple>& targets,
                                        double eps, const MembershipOptions& opts = {});

}  // namespace matrange

#endif  // MATRANGE_SPATIAL_HPP
