#ifndef MATRANGE_LAMBDA_PQ_HPP
#define MATRANGE_LAMBDA_PQ_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "matrange/essential_model.hpp"
#include "matrange/herm_core.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange {

/// Isometry X into A(n) with X* A_j X = I_p ⊗ B_j, built by realizing the
/// UCP map T ↦ I_p ⊗ Φ(T) on the body blocks. Because only body blocks are
/// used, the same X works for A(n) + K with K supported on the head.
/// Throws TruncationTooSmall or CertificateError.
Isometry lambda_realize(const HermTuple& b, const BlockRepetitionModel& model, Eigen::Index p, const ChoiMatrix& phi);

/// Σ_j ‖X* A_j X − I_p ⊗ B_j‖_F².
double lambda_objective(const CMatrix& x, const HermTuple& a, const HermTuple& target);

struct LambdaSearchOptions {
  int budget = 9000;  // gradient iterations over all restarts
  int restarts = 30;
  std::uint64_t seed = 0;
};

/// Projected gradient over isometries for f(X) = lambda_objective; returns X
/// once f < 1e-10, or nothing (inconclusive).
std::optional<Isometry> lambda_search(const HermTuple& b, const HermTuple& a, Eigen::Index p,
                                      const LambdaSearchOptions& opts = {});

struct LambdaReport {
  bool passed = false;
  int realized = 0;
  int refuted = 0;
  int skipped = 0;  // essential verdict inconclusive
  double worst_residual = 0.0;
  std::vector<std::string> failures;
};

struct LambdaCheckOptions {
  MembershipOptions membership;
  LambdaSearchOptions search;
};

/// For each probe: essential member ⟹ lambda_realize succeeds on A + K;
/// essential non-member ⟹ lambda_search finds nothing on A + K and the
/// membership oracle refutes B against A + K.
LambdaReport lambda_ess_check(const BlockRepetitionModel& model, Eigen::Index p, const std::vector<HermTuple>& probes,
                              const LambdaCheckOptions& opts = {});

}  // namespace matrange

#endif  // MATRANGE_LAMBDA_PQ_HPP
