#include "matrange/simplex_dilation.hpp"

#include <algorithm>
#include <limits>

#include "matrange/random.hpp"
#include "matrange/spatial.hpp"

namespace matrange {

double Povm::min_eigenvalue() const {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& e : elements) worst = std::min(worst, matrange::min_eigenvalue(e));
  return worst;
}

double Povm::completeness_error() const {
  if (elements.empty()) return std::numeric_limits<double>::infinity();
  CMatrix sum = CMatrix::Zero(dim(), dim());
  for (const auto& e : elements) sum += e;
  return spectral_norm(CMatrix(sum - CMatrix::Identity(dim(), dim())));
}

Povm barycentric_povm(const HermTuple& t, const Simplex& s) {
  if (static_cast<int>(t.size()) != s.m())
    throw DimensionError("barycentric_povm: tuple has " + std::to_string(t.size()) + " members, simplex is in R^" +
                         std::to_string(s.m()));
  const RMatrix& alpha = s.barycentric_coefficients();
  const Eigen::Index n = t.dim();
  Povm out;
  double worst = std::numeric_limits<double>::infinity();
  int worst_vertex = -1;
  for (int k = 0; k <= s.m(); ++k) {
    CMatrix q = alpha(k, 0) * CMatrix::Identity(n, n);
    for (int j = 0; j < s.m(); ++j) q += alpha(k, j + 1) * t[static_cast<std::size_t>(j)];
    q = hermitian_part(q);
    const double lo = min_eigenvalue(q);
    if (lo < worst) {
      worst = lo;
      worst_vertex = k;
    }
    out.elements.push_back(std::move(q));
  }
  if (worst < -Povm::kTol) throw NotInSimplex(worst, worst_vertex);
  return out;
}

Isometry naimark_dilate(const Povm& q) {
  if (!q.valid()) throw DimensionError("naimark_dilate: not a POVM");
  const Eigen::Index n = q.dim();
  const Eigen::Index outcomes = static_cast<Eigen::Index>(q.elements.size());
  CMatrix x = CMatrix::Zero(n * outcomes, n);
  for (Eigen::Index k = 0; k < outcomes; ++k) {
    const CMatrix root = psd_sqrt(q.elements[static_cast<std::size_t>(k)]);
    for (Eigen::Index a = 0; a < n; ++a) x.row(a * outcomes + k) = root.row(a);
  }
  return Isometry(std::move(x), 1e-9);
}

double dilation_residual(const Isometry& x, const HermTuple& t, const Simplex& s) {
  const Eigen::Index n = t.dim();
  const HermTuple lifted = ampliate(s.diagonal_tuple(), n);
  return tuple_distance(x.compress(lifted), t);
}

SimplexNormBound simplex_norm_bound(const NormTestTuple& r, const HermTuple& t, const Simplex& s) {
  barycentric_povm(t, s);
  SimplexNormBound out;
  out.lhs = pencil_norm(r, t);
  out.bound = vertex_pencil_norm(r, s);
  out.holds = out.lhs <= out.bound + kInequalitySlack;
  return out;
}

PreservationReport simplex_preservation_check(const BlockRepetitionModel& model, const Simplex& s, Eigen::Index q,
                                              const PreservationOptions& opts) {
  PreservationReport rep;
  const HermTuple& body = model.body();
  if (static_cast<int>(model.m()) != s.m()) throw DimensionError("simplex_preservation_check: m mismatch");

  // W(M) ⊆ S, and every vertex of S is an essential member, so W(M) = S.
  bool pre = true;
  try {
    barycentric_povm(body, s);
  } catch (const NotInSimplex& e) {
    pre = false;
    rep.failures.push_back({-1, std::string("W(M) not inside simplex: ") + e.what()});
  }
  for (int k = 0; k <= s.m(); ++k) {
    const RVector v = s.vertex(k);
    const HermTuple point = HermTuple::scalars(std::vector<double>(v.data(), v.data() + v.size()));
    const MembershipVerdict verdict = essential_membership(point, model, opts.membership);
    ++rep.vertices_checked;
    if (verdict.status != Status::Member) {
      pre = false;
      rep.failures.push_back({-1, "vertex " + std::to_string(k) + " is " + to_string(verdict.status)});
    }
  }
  rep.precondition_ok = pre;
  if (!pre) return rep;

  const PerturbationTuple k = preserving_perturbation(model);
  const BlockRepetitionModel perturbed = apply_perturbation(model.with_level(1), k);
  const HermTuple a_plus_k = perturbed.materialize();

  const Eigen::Index d = body.dim();
  for (int i = 0; i < opts.probes; ++i) {
    Rng rng = substream(opts.seed, static_cast<std::uint64_t>(i));
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(d * q));
    const ChoiMatrix phi = random_ucp_choi(d, q, rank, rng);
    const HermTuple probe = apply_choi(phi, body);
    ++rep.probes_checked;

    // Each probe is a member of W^q(M), so W(probe) ⊆ S.
    try {
      barycentric_povm(probe, s);
    } catch (const NotInSimplex& e) {
      rep.failures.push_back({i, std::string("probe outside simplex: ") + e.what()});
      continue;
    }

    MembershipOptions mo = opts.membership;
    mo.seed = opts.membership.seed + static_cast<std::uint64_t>(i);
    const MembershipVerdict verdict = membership(probe, a_plus_k, mo);
    if (verdict.status != Status::Member)
      rep.failures.push_back({i, "membership against A+K is " + to_string(verdict.status)});

    try {
      const Isometry v = realize_member(probe, body, phi);
      const double res = tuple_distance(v.compress(ampliate(body, realization_blocks(v, body))), probe);
      rep.worst_realization_residual = std::max(rep.worst_realization_residual, res);
    } catch (const Error& e) {
      rep.failures.push_back({i, std::string("realization failed: ") + e.what()});
    }

    for (int t = 0; t < opts.norm_trials; ++t) {
      const NormTestTuple r = random_norm_test(q, model.m(), rng);
      const SimplexNormBound nb = simplex_norm_bound(r, probe, s);
      const double chain = pencil_norm(r, a_plus_k);
      ++rep.norm_trials;
      rep.worst_norm_excess = std::max(rep.worst_norm_excess, nb.lhs - nb.bound);
      if (!nb.holds) rep.failures.push_back({i, "vertex norm bound violated"});
      // ‖·B‖ ≤ ‖·(A+K)‖ ≤ vertex bound.
      if (nb.lhs > chain + kInequalitySlack || chain > nb.bound + kInequalitySlack)
        rep.failures.push_back({i, "norm chain violated"});
    }
  }
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace matrange
