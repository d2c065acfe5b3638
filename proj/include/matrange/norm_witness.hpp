#ifndef MATRANGE_NORM_WITNESS_HPP
#define MATRANGE_NORM_WITNESS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "matrange/herm_core.hpp"
#include "matrange/random.hpp"
#include "matrange/simplex.hpp"

namespace matrange {

/// Right-hand side of the norm inequality: R ↦ ‖R_0 ⊗ I + Σ R_j ⊗ A_j‖ for
/// whatever A is being compared against.
using RefNormFn = std::function<double(const NormTestTuple&)>;

/// Slack used when deciding whether lhs ≤ rhs.
inline constexpr double kInequalitySlack = 1e-9;

/// Reference norm of a finite tuple.
RefNormFn finite_reference(HermTuple a);

struct InequalityCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = true;
};

/// lhs = ‖R_0 ⊗ I_q + Σ R_j ⊗ B_j‖, rhs = ref(R).
InequalityCheck check_inequality(const NormTestTuple& r, const HermTuple& b, const RefNormFn& ref);

/// A refuting R, normalized so that rhs = 1 (or lhs = 1 when rhs vanishes).
/// gap = lhs − rhs after normalization, so it is independent of the scale of R.
struct Witness {
  NormTestTuple r;
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
};

struct WitnessOptions {
  int budget = 20000;  // reference-norm evaluations
  int restarts = 50;
  double gap_tol = 1e-6;
  std::uint64_t seed = 0;
  /// Starting points tried before the random restarts (each consumes one
  /// restart's share of the budget).
  std::vector<NormTestTuple> hints;
  /// Return as soon as one restart produces a sound witness.
  bool stop_on_first = false;
};

/// Derivative-free search for R with lhs > rhs + gap_tol. Random complex
/// Gaussian starts, polished by per-coordinate line probes. Returns the best
/// witness over all restarts, or nothing (which proves nothing).
std::optional<Witness> search_witness(const HermTuple& b, const RefNormFn& ref, const WitnessOptions& opts = {});

/// Normalizes r against ref and re-evaluates it; used both by the search and
/// by callers that want to re-verify a stored witness from scratch.
Witness evaluate_witness(const NormTestTuple& r, const HermTuple& b, const RefNormFn& ref);

/// max_k ‖R_0 + Σ_j v_jk R_j‖ over the vertices of s.
double vertex_pencil_norm(const NormTestTuple& r, const Simplex& s);

/// Random R with unit-Gaussian complex entries.
NormTestTuple random_norm_test(Eigen::Index q, std::size_t m, Rng& rng);

}  // namespace matrange

#endif  // MATRANGE_NORM_WITNESS_HPP
