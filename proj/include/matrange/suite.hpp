#ifndef MATRANGE_SUITE_HPP
#define MATRANGE_SUITE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "matrange/json_io.hpp"
#include "matrange/random.hpp"
#include "matrange/simplex.hpp"

namespace matrange::suite {

// Support-function oracle for W(M), m = 2. Test-side only: the library never
// decides membership this way.

/// h(u) = λ_max(Σ u_j M_j).
double support_function(const HermTuple& m, const RVector& u);

/// min over an angle grid of h(u) − u·x: positive inside W(M) (the distance to
/// the boundary), negative outside.
double support_margin(const HermTuple& m, const RVector& x, int angles = 720);

/// Boundary points of W(M): (⟨v, M_1 v⟩, ⟨v, M_2 v⟩) for the top eigenvector v
/// of u_1 M_1 + u_2 M_2, one per grid angle.
std::vector<RVector> boundary_polyline(const HermTuple& m, int angles = 720);

// Instance generators.

/// Σ_k v_k Q_k for a random POVM Q with `outcomes` nonzero elements (the rest
/// zero), so W(T) lies in the simplex (on a face when outcomes < m+1).
HermTuple tuple_in_simplex(const Simplex& s, Eigen::Index n, int outcomes, Rng& rng);

/// Gaussian vertices, redrawn until well conditioned.
Simplex random_simplex(int m, Rng& rng);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string summary;
  Json details;
};

CriterionResult criterion_norm_consistency(std::uint64_t seed);
CriterionResult criterion_model_identity(std::uint64_t seed, Json* plots = nullptr);
CriterionResult criterion_cstar_convexity(std::uint64_t seed);
CriterionResult criterion_interior_dichotomy(std::uint64_t seed);
CriterionResult criterion_simplex_dilation(std::uint64_t seed);
CriterionResult criterion_block_compression(std::uint64_t seed);
CriterionResult criterion_perturbation_pipeline(std::uint64_t seed);

struct SuiteReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;
  Json plots = Json::array();

  bool all_passed() const;
  Json to_json() const;
};

/// Runs criteria 1-7 in order; `progress` is called after each one.
SuiteReport run_theorem_suite(std::uint64_t seed,
                              const std::function<void(const CriterionResult&)>& progress = {});

}  // namespace matrange::suite

#endif  // MATRANGE_SUITE_HPP
