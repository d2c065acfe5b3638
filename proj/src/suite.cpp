#include "matrange/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "matrange/essential_model.hpp"
#include "matrange/lambda_pq.hpp"
#include "matrange/norm_witness.hpp"
#include "matrange/simplex_dilation.hpp"
#include "matrange/spatial.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange::suite {

namespace {

RVector angle(int i, int angles) {
  const double t = 2.0 * std::numbers::pi * i / angles;
  RVector u(2);
  u << std::cos(t), std::sin(t);
  return u;
}

CMatrix direction_pencil(const HermTuple& m, const RVector& u) {
  CMatrix p = CMatrix::Zero(m.dim(), m.dim());
  for (std::size_t j = 0; j < m.size(); ++j) p += u(static_cast<Eigen::Index>(j)) * m[j];
  return p;
}

RVector centroid(const HermTuple& m) {
  RVector c(static_cast<Eigen::Index>(m.size()));
  for (std::size_t j = 0; j < m.size(); ++j) c(static_cast<Eigen::Index>(j)) = m[j].trace().real() / m.dim();
  return c;
}

HermTuple point(const RVector& x) { return HermTuple::scalars(std::vector<double>(x.data(), x.data() + x.size())); }

Eigen::Index pick(Eigen::Index lo, Eigen::Index hi, Rng& rng) {
  return lo + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

MembershipOptions seeded(std::uint64_t seed) {
  MembershipOptions o;
  o.seed = seed;
  return o;
}

}  // namespace

double support_function(const HermTuple& m, const RVector& u) { return max_eigenvalue(direction_pencil(m, u)); }

double support_margin(const HermTuple& m, const RVector& x, int angles) {
  if (m.size() != 2 || x.size() != 2) throw DimensionError("support_margin: only m = 2 is supported");
  std::vector<RVector> dirs;
  for (int i = 0; i < angles; ++i) dirs.push_back(angle(i, angles));
  // A flat range (I, M_1, M_2 dependent) needs its exact normal, which no
  // finite grid contains: read it off the null vector of the raw entries.
  const Eigen::Index d = m.dim();
  RMatrix raw(2 * d * d, 3);
  const CMatrix id = CMatrix::Identity(d, d);
  for (Eigen::Index c = 0; c < 3; ++c) {
    const CMatrix& src = c == 0 ? id : m[static_cast<std::size_t>(c - 1)];
    raw.col(c) << Eigen::Map<const RMatrix>(src.real().eval().data(), d * d, 1),
        Eigen::Map<const RMatrix>(src.imag().eval().data(), d * d, 1);
  }
  Eigen::JacobiSVD<RMatrix> svd(raw, Eigen::ComputeThinV);
  const RVector& sv = svd.singularValues();
  if (sv(2) < 1e-10 * sv(0)) {
    const RVector n = svd.matrixV().col(2).tail(2);
    if (n.norm() > 0.0) {
      dirs.push_back(n / n.norm());
      dirs.push_back(-n / n.norm());
    }
  }
  double margin = std::numeric_limits<double>::infinity();
  for (const RVector& u : dirs) margin = std::min(margin, support_function(m, u) - u.dot(x));
  return margin;
}

std::vector<RVector> boundary_polyline(const HermTuple& m, int angles) {
  if (m.size() != 2) throw DimensionError("boundary_polyline: only m = 2 is supported");
  std::vector<RVector> out;
  for (int i = 0; i < angles; ++i) {
    const HermEig e = herm_eig(direction_pencil(m, angle(i, angles)));
    const CVector v = e.vectors.col(m.dim() - 1);
    RVector p(2);
    p << v.dot(m[0] * v).real(), v.dot(m[1] * v).real();
    out.push_back(p);
  }
  return out;
}

HermTuple tuple_in_simplex(const Simplex& s, Eigen::Index n, int outcomes, Rng& rng) {
  const int total = s.m() + 1;
  outcomes = std::clamp(outcomes, 1, total);
  const Isometry v = random_isometry(n * outcomes, n, rng);
  // Which outcomes carry weight: a random subset of size `outcomes`.
  std::vector<int> order(static_cast<std::size_t>(total));
  for (int k = 0; k < total; ++k) order[static_cast<std::size_t>(k)] = k;
  for (int k = total - 1; k > 0; --k) std::swap(order[static_cast<std::size_t>(k)], order[rng() % static_cast<std::uint64_t>(k + 1)]);
  std::vector<CMatrix> t(static_cast<std::size_t>(s.m()), CMatrix::Zero(n, n));
  for (int i = 0; i < outcomes; ++i) {
    const CMatrix block = v.matrix().middleRows(i * n, n);
    const CMatrix q = block.adjoint() * block;
    const int k = order[static_cast<std::size_t>(i)];
    for (int j = 0; j < s.m(); ++j) t[static_cast<std::size_t>(j)] += s.vertices()(j, k) * q;
  }
  return HermTuple(std::move(t));
}

Simplex random_simplex(int m, Rng& rng) {
  for (;;) {
    const RMatrix v = gaussian_matrix(m, m + 1, rng).real();
    RMatrix aug(m + 1, m + 1);
    aug.row(0).setOnes();
    aug.bottomRows(m) = v;
    Eigen::JacobiSVD<RMatrix> svd(aug);
    const RVector& s = svd.singularValues();
    if (s(m) > 0.2 * s(0)) return Simplex(v);
  }
}

// 1. Membership verdicts never contradict the norm inequality.
CriterionResult criterion_norm_consistency(std::uint64_t seed) {
  CriterionResult res{1, "norm characterization consistency", false, "", Json::object()};
  int members = 0, refuted = 0, inconclusive = 0, contradictions = 0, trials = 0;
  double worst_violation = -std::numeric_limits<double>::infinity();
  Json incidents = Json::array();
  for (int i = 0; i < 50; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const HermTuple a = random_tuple(2, 6, rng);
    HermTuple b = apply_choi(random_ucp_choi(6, 2, pick(1, 4, rng), rng), a);
    if (i % 3 == 1) {
      // Stretch a member away from the centre of the range.
      const RVector c = centroid(a);
      const double f = uniform(1.3, 2.5, rng);
      std::vector<CMatrix> s;
      for (std::size_t j = 0; j < 2; ++j) {
        const CMatrix ci = c(static_cast<Eigen::Index>(j)) * CMatrix::Identity(2, 2);
        s.push_back(ci + f * (b[j] - ci));
      }
      b = HermTuple(std::move(s));
    } else if (i % 3 == 2) {
      b = random_tuple(2, 2, rng, uniform(0.2, 1.2, rng));
    }
    const RefNormFn ref = finite_reference(a);
    const MembershipVerdict v = membership(b, a, seeded(seed + static_cast<std::uint64_t>(i)));
    if (v.status == Status::Member) {
      ++members;
      const CertificateCheck cc = verify_certificate(*v.certificate, a, b);
      if (cc.residual > 1e-6 || cc.min_eigenvalue < -1e-8 || cc.unitality_error > 1e-8) {
        ++contradictions;
        incidents.push_back({{"instance", i}, {"problem", "certificate fails verification"}});
      }
      for (int t = 0; t < 1000; ++t) {
        const InequalityCheck c = check_inequality(random_norm_test(2, 2, rng), b, ref);
        ++trials;
        const double rel = (c.lhs - c.rhs) / std::max(1.0, c.rhs);
        worst_violation = std::max(worst_violation, rel);
        if (rel > 1e-6) {
          ++contradictions;
          incidents.push_back({{"instance", i}, {"problem", "random R violates the inequality"}});
          break;
        }
      }
      WitnessOptions wo;
      wo.seed = seed + 1000 + static_cast<std::uint64_t>(i);
      if (auto w = search_witness(b, ref, wo)) {
        ++contradictions;
        incidents.push_back({{"instance", i}, {"problem", "witness search refuted a member"}, {"gap", w->gap}});
      }
    } else if (v.status == Status::NotMember) {
      ++refuted;
      const Witness again = evaluate_witness(v.witness->r, b, ref);
      if (!(again.lhs > again.rhs + 1e-6 * std::max(1.0, again.rhs))) {
        ++contradictions;
        incidents.push_back({{"instance", i}, {"problem", "witness does not re-verify"}});
      }
    } else {
      ++inconclusive;
    }
  }
  res.passed = contradictions == 0 && members > 0 && refuted > 0;
  res.summary = std::to_string(members) + " member, " + std::to_string(refuted) + " refuted, " +
                std::to_string(inconclusive) + " inconclusive; " + std::to_string(contradictions) + " contradictions";
  res.details = {{"instances", 50},       {"members", members},
                 {"refuted", refuted},    {"inconclusive", inconclusive},
                 {"random_trials", trials}, {"worst_relative_excess", worst_violation},
                 {"contradictions", contradictions}, {"incidents", incidents}};
  return res;
}

// 2. The model's essential range matches an independent oracle.
CriterionResult criterion_model_identity(std::uint64_t seed, Json* plots) {
  CriterionResult res{2, "essential range model identity", false, "", Json::object()};
  int agree = 0, disagree = 0, banded = 0, q2_checked = 0, q2_failed = 0;
  Json models = Json::array(), incidents = Json::array();
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const Eigen::Index d = 2 + i % 3;
    HermTuple body = random_tuple(2, d, rng);
    if (i % 5 == 0) {
      // Diagonal body: W(M) is a polygon.
      std::vector<CMatrix> mats;
      for (int j = 0; j < 2; ++j) mats.push_back(gaussian_matrix(d, 1, rng).real().cast<Complex>().asDiagonal());
      body = HermTuple(std::move(mats));
    }
    const Eigen::Index h = 1 + i % 3;
    const BlockRepetitionModel model(random_tuple(2, h, rng, 3.0), body, 2);

    // Bounding box of W(M), enlarged.
    RVector lo(2), hi(2);
    for (Eigen::Index j = 0; j < 2; ++j) {
      RVector e = RVector::Zero(2);
      e(j) = 1.0;
      hi(j) = support_function(body, e);
      lo(j) = -support_function(body, RVector(-e));
      const double pad = 0.25 * (hi(j) - lo(j)) + 1e-3;
      lo(j) -= pad;
      hi(j) += pad;
    }
    int model_disagree = 0;
    for (int s = 0; s < 200; ++s) {
      RVector x(2);
      for (Eigen::Index j = 0; j < 2; ++j) x(j) = uniform(lo(j), hi(j), rng);
      const double margin = support_margin(body, x);
      if (std::abs(margin) <= 1e-4) {
        ++banded;
        continue;
      }
      const MembershipVerdict v =
          essential_membership(point(x), model, seeded(seed + static_cast<std::uint64_t>(1000 * i + s)));
      const bool ok = margin > 0 ? v.status == Status::Member : v.status == Status::NotMember;
      if (ok) {
        ++agree;
      } else {
        ++disagree;
        ++model_disagree;
        incidents.push_back({{"model", i}, {"point", {x(0), x(1)}}, {"margin", margin},
                             {"status", to_string(v.status)}, {"gap", v.gap}, {"iterations", v.iterations}});
      }
    }

    // q = 2: members of W^2(M) survive arbitrary finite-rank head perturbations.
    for (int probe = 0; probe < 2; ++probe) {
      const HermTuple b = apply_choi(random_ucp_choi(d, 2, pick(1, 2 * d, rng), rng), body);
      for (int k = 0; k < 10; ++k) {
        const PerturbationTuple kp{random_tuple(2, h, rng, 3.0), static_cast<int>(h)};
        const HermTuple apk = apply_perturbation(model, kp).materialize();
        ++q2_checked;
        if (membership(b, apk, seeded(seed + static_cast<std::uint64_t>(probe * 10 + k))).status != Status::Member)
          ++q2_failed;
      }
    }
    models.push_back({{"model", i}, {"body_dim", d}, {"head_dim", h}, {"disagreements", model_disagree}});

    if (plots) {
      Json line = Json::array();
      for (const RVector& p : boundary_polyline(body)) line.push_back({p(0), p(1)});
      plots->push_back({{"criterion", 2}, {"model", i}, {"body", tuple_to_json(body)}, {"boundary", std::move(line)}});
    }
  }
  res.passed = disagree == 0 && q2_failed == 0;
  res.summary = std::to_string(agree) + " probes agree, " + std::to_string(disagree) + " disagree, " +
                std::to_string(banded) + " in band; q=2 accepted " + std::to_string(q2_checked - q2_failed) + "/" +
                std::to_string(q2_checked);
  res.details = {{"agree", agree},          {"disagree", disagree},   {"in_band", banded},
                 {"q2_checks", q2_checked}, {"q2_failures", q2_failed}, {"incidents", incidents},
                 {"models", models}};
  return res;
}

// 3. Operator convex combinations of members stay members.
CriterionResult criterion_cstar_convexity(std::uint64_t seed) {
  CriterionResult res{3, "C*-convexity", false, "", Json::object()};
  int member = 0, refuted = 0, inconclusive = 0;
  double worst_residual = 0.0;
  HermTuple a;
  std::vector<HermTuple> pool;
  for (int i = 0; i < 500; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    if (i % 50 == 0) {
      a = random_tuple(2, 4, rng);
      pool.clear();
      for (int k = 0; k < 4; ++k) pool.push_back(apply_choi(random_ucp_choi(4, 2, pick(1, 4, rng), rng), a));
    }
    const std::size_t count = 2 + static_cast<std::size_t>(rng() % 3);
    std::vector<HermTuple> chosen;
    for (std::size_t k = 0; k < count; ++k) chosen.push_back(pool[rng() % pool.size()]);
    const HermTuple c = cstar_combine(chosen, random_cstar_coefficients(count, 2, rng));
    const MembershipVerdict v = membership(c, a, seeded(seed + static_cast<std::uint64_t>(i)));
    if (v.status == Status::Member) {
      ++member;
      worst_residual = std::max(worst_residual, v.residual);
    } else if (v.status == Status::NotMember) {
      ++refuted;
    } else {
      ++inconclusive;
    }
  }
  res.passed = refuted == 0 && worst_residual <= 1e-6;
  res.summary = std::to_string(member) + "/500 re-accepted, " + std::to_string(refuted) + " refuted, " +
                std::to_string(inconclusive) + " inconclusive";
  res.details = {{"member", member}, {"refuted", refuted}, {"inconclusive", inconclusive}, {"worst_residual", worst_residual}};
  return res;
}

// 4. Independence of {I, M_j} decides whether the range has interior.
CriterionResult criterion_interior_dichotomy(std::uint64_t seed) {
  CriterionResult res{4, "interior dichotomy", false, "", Json::object()};
  int matched = 0;
  Json models = Json::array();
  for (int i = 0; i < 20; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const bool dependent = i < 10;
    const Eigen::Index d = 3 + i % 2;
    HermTuple body;
    if (dependent) {
      const CMatrix m1 = random_hermitian(d, rng);
      if (i % 2 == 0)
        body = HermTuple({m1, CMatrix(uniform(-1, 1, rng) * CMatrix::Identity(d, d) + uniform(0.5, 2, rng) * m1)});
      else
        body = HermTuple({CMatrix(uniform(-1, 1, rng) * CMatrix::Identity(d, d)), m1});
    } else {
      body = random_tuple(2, d, rng);
    }
    const BlockRepetitionModel model(random_tuple(2, 2, rng, 3.0), body, 1);
    const InteriorTest it = interior_test(model);
    bool ok = it.independent == !dependent;
    Json info = {{"model", i}, {"dependent", dependent}, {"reported_independent", it.independent}};

    if (ok && dependent) {
      const RVector& a = *it.witness;
      double worst = 0.0;
      for (int probe = 0; probe < 6; ++probe) {
        const Eigen::Index q = 1 + probe % 2;
        const HermTuple b = apply_choi(random_ucp_choi(d, q, pick(1, d * q, rng), rng), body);
        const MembershipVerdict v = essential_membership(b, model, seeded(seed + static_cast<std::uint64_t>(probe)));
        if (v.status != Status::Member) {
          ok = false;
          continue;
        }
        const CMatrix rel = a(0) * CMatrix::Identity(q, q) + a(1) * b[0] + a(2) * b[1];
        worst = std::max(worst, spectral_norm(rel));
      }
      if (worst > 1e-7) ok = false;
      // A point off the affine relation is not in the range.
      RVector off = centroid(body) + 0.05 * a.tail(2) / a.tail(2).norm();
      if (essential_membership(point(off), model, seeded(seed)).status == Status::Member) ok = false;
      info["worst_relation_residual"] = worst;
    } else if (ok) {
      const RVector c = centroid(body);
      // Largest box radius: bounded by the axis extents of W(M).
      double hi = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < 2; ++j) {
        RVector e = RVector::Zero(2);
        e(j) = 1.0;
        hi = std::min({hi, support_function(body, e) - c(j), support_function(body, RVector(-e)) + c(j)});
      }
      auto box_inside = [&](double r) {
        for (int s0 : {-1, 1})
          for (int s1 : {-1, 1}) {
            RVector x = c;
            x(0) += s0 * r;
            x(1) += s1 * r;
            if (essential_membership(point(x), model, seeded(seed)).status != Status::Member) return false;
          }
        return true;
      };
      double lo = 0.0;
      for (int step = 0; step < 14; ++step) {
        const double mid = 0.5 * (lo + hi);
        if (box_inside(mid)) lo = mid;
        else hi = mid;
      }
      const double r = 0.9 * lo;
      info["radius"] = r;
      if (!(r > 0.0)) ok = false;
      int failures = 0;
      for (int s = 0; s < 20 && ok; ++s) {
        RVector x = c;
        for (Eigen::Index j = 0; j < 2; ++j) x(j) += uniform(-r, r, rng);
        if (essential_membership(point(x), model, seeded(seed + static_cast<std::uint64_t>(s))).status != Status::Member)
          ++failures;
      }
      // q = 2: B_j = c_j I + E_j with ‖E_j‖ ≤ r/m.
      for (int s = 0; s < 10 && ok; ++s) {
        std::vector<CMatrix> mats;
        for (Eigen::Index j = 0; j < 2; ++j)
          mats.push_back(c(j) * CMatrix::Identity(2, 2) + random_hermitian(2, rng, uniform(0.0, 1.0, rng) * r / 2.0));
        if (essential_membership(HermTuple(std::move(mats)), model, seeded(seed + static_cast<std::uint64_t>(s))).status !=
            Status::Member)
          ++failures;
      }
      info["ball_failures"] = failures;
      if (failures > 0) ok = false;
    }
    info["matched"] = ok;
    if (ok) ++matched;
    models.push_back(std::move(info));
  }
  res.passed = matched == 20;
  res.summary = std::to_string(matched) + "/20 models match the interior test";
  res.details = {{"matched", matched}, {"models", models}};
  return res;
}

// 5. Dilation into the simplex's diagonal tuple and the vertex norm bound.
CriterionResult criterion_simplex_dilation(std::uint64_t seed) {
  CriterionResult res{5, "simplex dilation and vertex bound", false, "", Json::object()};
  int povm_ok = 0, dilation_ok = 0, bound_failures = 0, equality_failures = 0;
  double worst_residual = 0.0, worst_equality = 0.0, worst_excess = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < 100; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const Simplex s = random_simplex(2, rng);
    const HermTuple t = tuple_in_simplex(s, 5, i % 4 == 0 ? 2 : 3, rng);
    try {
      const Povm q = barycentric_povm(t, s);
      if (q.valid()) ++povm_ok;
      const Isometry x = naimark_dilate(q);
      const double r = dilation_residual(x, t, s);
      worst_residual = std::max(worst_residual, r);
      if (r <= 1e-8 && x.orthonormality_error() <= 1e-9) ++dilation_ok;
    } catch (const Error&) {
      continue;
    }
    for (int k = 0; k < 200; ++k) {
      const SimplexNormBound b = simplex_norm_bound(random_norm_test(2, 2, rng), t, s);
      worst_excess = std::max(worst_excess, b.lhs - b.bound);
      if (!b.holds) ++bound_failures;
    }
    const HermTuple dt = s.diagonal_tuple();
    for (int k = 0; k < 5; ++k) {
      const SimplexNormBound b = simplex_norm_bound(random_norm_test(2, 2, rng), dt, s);
      worst_equality = std::max(worst_equality, std::abs(b.lhs - b.bound));
      if (std::abs(b.lhs - b.bound) > 1e-10) ++equality_failures;
    }
  }
  res.passed = povm_ok == 100 && dilation_ok == 100 && bound_failures == 0 && equality_failures == 0;
  res.summary = std::to_string(dilation_ok) + "/100 dilations within 1e-8 (worst " + fmt(worst_residual) + "), " +
                std::to_string(bound_failures) + " bound failures, worst equality gap " + fmt(worst_equality);
  res.details = {{"povm_valid", povm_ok},          {"dilations_ok", dilation_ok},
                 {"worst_dilation_residual", worst_residual}, {"bound_failures", bound_failures},
                 {"worst_bound_excess", worst_excess},        {"equality_failures", equality_failures},
                 {"worst_equality_gap", worst_equality}};
  return res;
}

// 6. Block-diagonal compressions with prescribed blocks.
CriterionResult criterion_block_compression(std::uint64_t seed) {
  CriterionResult res{6, "block compression", false, "", Json::object()};
  bool ok = true;
  Json runs = Json::array();
  int run = 0;
  for (Eigen::Index p : {1, 2}) {
    for (int rep = 0; rep < 3; ++rep, ++run) {
      Rng rng = substream(seed, static_cast<std::uint64_t>(run));
      BlockRepetitionModel model(random_tuple(2, 2, rng, 3.0), random_tuple(2, 3, rng), 1);
      std::vector<HermTuple> targets;
      if (p == 1 && rep == 0) {
        // Vertices of a simplex-valued body.
        const Simplex s = random_simplex(2, rng);
        model = BlockRepetitionModel(random_tuple(2, 2, rng, 3.0), s.diagonal_tuple(), 1);
        for (int k = 0; k < 3; ++k) targets.push_back(point(s.vertex(k)));
      } else {
        for (int k = 0; k < 3; ++k)
          targets.push_back(apply_choi(random_ucp_choi(3, p, pick(1, 3, rng), rng), model.body()));
      }
      Json info = {{"p", p}, {"run", run}};
      try {
        const BlockCompression c = block_compress_growing(model, targets, 1e-6, seeded(seed));
        const double dev = *std::max_element(c.deviations.begin(), c.deviations.end());
        info["level"] = model.level();
        info["off_diagonal"] = c.off_diagonal;
        info["max_deviation"] = dev;
        info["stage_orthogonality"] = c.stage_orthogonality;
        info["orthonormality_error"] = c.z.orthonormality_error();
        if (c.off_diagonal > 1e-9 || dev > 1e-6 || c.stage_orthogonality > 1e-9 || c.z.orthonormality_error() > 1e-9)
          ok = false;
      } catch (const Error& e) {
        info["error"] = e.what();
        ok = false;
      }
      runs.push_back(std::move(info));
    }
  }
  res.passed = ok;
  res.summary = ok ? "6/6 constructions block diagonal within tolerance" : "construction out of tolerance";
  res.details = {{"runs", runs}};
  return res;
}

// 7. Perturbation, simplex preservation and rank-(p, q) ranges.
CriterionResult criterion_perturbation_pipeline(std::uint64_t seed) {
  CriterionResult res{7, "perturbation pipeline", false, "", Json::object()};
  bool ok = true;
  Json models = Json::array();
  for (int i = 0; i < 10; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    const bool simplex_valued = i < 5;
    const Eigen::Index h = 1 + i % 3;
    std::optional<Simplex> s;
    HermTuple body;
    if (simplex_valued) {
      s = random_simplex(2, rng);
      HermTuple diag = s->diagonal_tuple();
      if (i % 2 == 1) {
        // Extra interior point, then a random change of basis.
        const HermTuple inner = tuple_in_simplex(*s, 1, 3, rng);
        diag = direct_sum(diag, inner);
      }
      body = conjugate(diag, random_unitary(diag.dim(), rng));
    } else {
      body = random_tuple(2, 3, rng);
    }
    // Heads far outside the essential range.
    const BlockRepetitionModel model(random_tuple(2, h, rng, 4.0), body, 1);
    Json info = {{"model", i}, {"simplex_valued", simplex_valued}, {"head_dim", h}, {"body_dim", body.dim()}};

    const PerturbationTuple k = preserving_perturbation(model);
    const HermTuple apk = apply_perturbation(model, k).materialize();
    double norm_gap = 0.0;
    for (int t = 0; t < 20; ++t) {
      const NormTestTuple r = random_norm_test(2, 2, rng);
      norm_gap = std::max(norm_gap, std::abs(pencil_norm(r, apk) - essential_pencil_norm(model, r)));
    }
    info["essential_norm_gap"] = norm_gap;
    if (norm_gap > 1e-10) ok = false;

    if (s) {
      Json checks = Json::array();
      for (Eigen::Index q : {1, 2, 3}) {
        PreservationOptions po;
        po.probes = 8;
        po.norm_trials = 10;
        po.seed = seed + static_cast<std::uint64_t>(10 * i + q);
        const PreservationReport rep = simplex_preservation_check(model, *s, q, po);
        Json c = {{"q", q}, {"passed", rep.passed}, {"probes", rep.probes_checked},
                  {"worst_realization_residual", rep.worst_realization_residual}};
        Json failures = Json::array();
        for (const auto& f : rep.failures) failures.push_back({{"probe", f.probe}, {"reason", f.reason}});
        c["failures"] = failures;
        checks.push_back(std::move(c));
        if (!rep.passed) ok = false;
      }
      info["simplex_checks"] = checks;
    }

    // Λ_{2,2}: four members and two stretched points.
    std::vector<HermTuple> probes;
    const RVector c = centroid(body);
    for (int p = 0; p < 6; ++p) {
      HermTuple b = apply_choi(random_ucp_choi(body.dim(), 2, pick(1, 2 * body.dim(), rng), rng), body);
      if (p >= 4) {
        std::vector<CMatrix> st;
        for (Eigen::Index j = 0; j < 2; ++j) {
          const CMatrix cj = c(j) * CMatrix::Identity(2, 2);
          st.push_back(cj + 3.0 * (b[static_cast<std::size_t>(j)] - cj) +
                       (j == 0 ? 1.0 : -1.0) * CMatrix::Identity(2, 2));
        }
        b = HermTuple(std::move(st));
      }
      probes.push_back(std::move(b));
    }
    LambdaCheckOptions lo;
    lo.membership.seed = seed + static_cast<std::uint64_t>(i);
    lo.search = {.budget = 3000, .restarts = 10, .seed = seed + static_cast<std::uint64_t>(i)};
    const LambdaReport lr = lambda_ess_check(model, 2, probes, lo);
    Json lambda = {{"passed", lr.passed}, {"realized", lr.realized}, {"refuted", lr.refuted},
                   {"skipped", lr.skipped}, {"worst_residual", lr.worst_residual}, {"failures", lr.failures}};
    info["lambda"] = lambda;
    if (!lr.passed || lr.realized != 4 || lr.refuted + lr.skipped != 2) ok = false;
    models.push_back(std::move(info));
  }

  // Head outlier: a member of W(A(n)) that the perturbation removes.
  const BlockRepetitionModel outlier(HermTuple({CMatrix::Constant(1, 1, 5.0)}),
                                     HermTuple({CMatrix(Eigen::Vector2d(1, -1).cast<Complex>().asDiagonal())}), 2);
  const HermTuple five = HermTuple::scalars({5.0});
  const Status before = membership(five, outlier.materialize(), seeded(seed)).status;
  const Status ess = essential_membership(five, outlier, seeded(seed)).status;
  const Status after =
      membership(five, apply_perturbation(outlier, preserving_perturbation(outlier)).materialize(), seeded(seed)).status;
  const bool regression = before == Status::Member && ess == Status::NotMember && after == Status::NotMember;
  if (!regression) ok = false;

  res.passed = ok;
  res.summary = std::string(ok ? "all 10 models pass" : "pipeline failures") + "; head outlier " +
                to_string(before) + " before, " + to_string(after) + " after";
  res.details = {{"models", models},
                 {"head_outlier", {{"before", to_string(before)}, {"essential", to_string(ess)}, {"after", to_string(after)}}}};
  return res;
}

bool SuiteReport::all_passed() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.passed; });
}

Json SuiteReport::to_json() const {
  Json cs = Json::array();
  for (const auto& c : criteria)
    cs.push_back({{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"summary", c.summary}, {"details", c.details}});
  return {{"seed", seed}, {"all_passed", all_passed()}, {"criteria", cs}, {"plots", plots}};
}

SuiteReport run_theorem_suite(std::uint64_t seed, const std::function<void(const CriterionResult&)>& progress) {
  SuiteReport rep;
  rep.seed = seed;
  auto record = [&](CriterionResult c) {
    if (progress) progress(c);
    rep.criteria.push_back(std::move(c));
  };
  // Each criterion draws from its own stream.
  record(criterion_norm_consistency(substream(seed, 1)()));
  record(criterion_model_identity(substream(seed, 2)(), &rep.plots));
  record(criterion_cstar_convexity(substream(seed, 3)()));
  record(criterion_interior_dichotomy(substream(seed, 4)()));
  record(criterion_simplex_dilation(substream(seed, 5)()));
  record(criterion_block_compression(substream(seed, 6)()));
  record(criterion_perturbation_pipeline(substream(seed, 7)()));
  return rep;
}

}  // namespace matrange::suite
