#include "doctest.h"

#include "matrange/random.hpp"
#include "matrange/ucp_choi.hpp"

using namespace matrange;

namespace {

CMatrix diag(std::initializer_list<double> v) {
  RVector d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.cast<Complex>().asDiagonal();
}

// For a single Hermitian A, B ∈ W^q(A) iff spec(B) ⊆ [λ_min(A), λ_max(A)].
// Returns the signed distance of spec(B) to the outside of that interval
// (positive inside).
double single_operator_margin(const CMatrix& b, const CMatrix& a) {
  const HermEig ea = herm_eig(a), eb = herm_eig(b);
  const double lo = ea.values(0), hi = ea.values(ea.values.size() - 1);
  return std::min(eb.values(0) - lo, hi - eb.values(eb.values.size() - 1));
}

void check_member_invariants(const MembershipVerdict& v, const HermTuple& a, const HermTuple& b) {
  REQUIRE(v.certificate.has_value());
  const CertificateCheck c = verify_certificate(*v.certificate, a, b);
  CHECK(c.residual <= 1e-6);
  CHECK(c.min_eigenvalue >= -1e-8);
  CHECK(c.unitality_error <= 1e-8);
}

void check_not_member_invariants(const MembershipVerdict& v, const HermTuple& a, const HermTuple& b) {
  REQUIRE(v.witness.has_value());
  const InequalityCheck c = check_inequality(v.witness->r, b, finite_reference(a));
  CHECK(c.lhs > c.rhs + 1e-6 * c.rhs);
}

}  // namespace

TEST_CASE("apply_choi of the identity map returns its input") {
  Rng rng(1);
  const CMatrix t = random_hermitian(3, rng);
  CHECK((apply_choi(choi_identity(3), t) - t).norm() < 1e-14);
}

TEST_CASE("apply_choi of a compression matches X* T X") {
  Rng rng(2);
  for (int trial = 0; trial < 10; ++trial) {
    const Isometry x = random_isometry(5, 2, rng);
    const CMatrix t = random_hermitian(5, rng);
    const CMatrix direct = x.matrix().adjoint() * t * x.matrix();
    CHECK(spectral_norm(CMatrix(apply_choi(choi_of_compression(x.matrix()), t) - direct)) <= 1e-10);
  }
}

TEST_CASE("apply_choi of the normalized trace map") {
  const CMatrix out = apply_choi(choi_trace_map(2, 3), diag({2, 0}));
  CHECK((out - CMatrix::Identity(3, 3)).norm() < 1e-14);
  CHECK_THROWS_AS(apply_choi(choi_trace_map(2, 3), CMatrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("random UCP maps are UCP") {
  Rng rng(3);
  const ChoiMatrix phi = random_ucp_choi(4, 2, 3, rng);
  CHECK(phi.is_ucp());
  CHECK(phi.unitality_error() < 1e-12);
}

TEST_CASE("kraus_decomposition examples") {
  auto k = kraus_decomposition(choi_identity(3));
  REQUIRE(k.size() == 1);
  // Equal to I up to a global phase.
  CHECK(std::abs(std::abs(k[0].trace()) - 3.0) < 1e-12);
  CHECK(spectral_norm(CMatrix(k[0].adjoint() * k[0] - CMatrix::Identity(3, 3))) < 1e-12);

  Rng rng(4);
  const Isometry x = random_isometry(4, 2, rng);
  k = kraus_decomposition(choi_of_compression(x.matrix()));
  REQUIRE(k.size() == 1);
  const Complex overlap = (x.matrix().adjoint() * k[0]).trace() / 2.0;
  CHECK(std::abs(std::abs(overlap) - 1.0) < 1e-12);
  CHECK((k[0] - overlap * x.matrix()).norm() < 1e-10);
}

TEST_CASE("kraus_decomposition reconstructs random UCP maps") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const ChoiMatrix phi = random_ucp_choi(3, 2, 4, rng);
    const auto kraus = kraus_decomposition(phi);
    CHECK(kraus.size() <= 6);
    CMatrix sum = CMatrix::Zero(2, 2);
    for (const auto& k : kraus) sum += k.adjoint() * k;
    CHECK(spectral_norm(CMatrix(sum - CMatrix::Identity(2, 2))) <= 1e-8);
    const CMatrix t = gaussian_matrix(3, 3, rng);
    CMatrix direct = CMatrix::Zero(2, 2);
    for (const auto& k : kraus) direct += k.adjoint() * t * k;
    CHECK(spectral_norm(CMatrix(direct - apply_choi(phi, t))) <= 1e-8);
  }
}

TEST_CASE("kraus_decomposition rejects non-CP maps") {
  CMatrix j = choi_identity(2).matrix();
  j(0, 0) -= 0.5;
  j(3, 3) += 0.5;
  // Partial transpose-like perturbation that breaks positivity.
  j(1, 2) = 1.0;
  j(2, 1) = 1.0;
  CHECK_THROWS_AS(kraus_decomposition(ChoiMatrix(2, 2, j)), CertificateError);
}

TEST_CASE("membership: scaled diagonal inside the spectral interval") {
  const HermTuple a({diag({1, -1})});
  const HermTuple b({diag({0.5, -0.5})});
  CHECK(single_operator_margin(b[0], a[0]) > 0.0);
  const MembershipVerdict v = membership(b, a);
  CHECK(v.status == Status::Member);
  check_member_invariants(v, a, b);
}

TEST_CASE("membership: scalar beyond the norm is refuted") {
  const HermTuple a({diag({1, -1})});
  const HermTuple b = HermTuple::scalars({1.5});
  const MembershipVerdict v = membership(b, a);
  REQUIRE(v.status == Status::NotMember);
  check_not_member_invariants(v, a, b);
  CHECK(v.witness->gap >= 0.5 - 1e-9);
}

TEST_CASE("membership agrees with the spectral-interval oracle for a single operator") {
  Rng rng(6);
  int members = 0, refuted = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const HermTuple a({random_hermitian(4, rng, 1.0)});
    const HermTuple b({random_hermitian(2, rng, uniform(0.2, 1.6, rng))});
    const double margin = single_operator_margin(b[0], a[0]);
    if (std::abs(margin) < 1e-3) continue;
    const MembershipVerdict v = membership(b, a);
    if (margin > 0) {
      CHECK(v.status == Status::Member);
      if (v.status == Status::Member) check_member_invariants(v, a, b), ++members;
    } else {
      CHECK(v.status != Status::Member);
      if (v.status == Status::NotMember) check_not_member_invariants(v, a, b), ++refuted;
    }
  }
  CHECK(members > 3);
  CHECK(refuted > 3);
}

TEST_CASE("membership accepts compressions") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const HermTuple a = random_tuple(2, 5, rng);
    const Isometry x = random_isometry(5, 2, rng);
    const HermTuple b = x.compress(a);
    const MembershipVerdict v = membership(b, a);
    CHECK(v.status == Status::Member);
    if (v.status == Status::Member) check_member_invariants(v, a, b);
  }
}

TEST_CASE("membership handles inconsistent linear constraints") {
  // A_1 = I forces B_1 = I.
  const HermTuple a({CMatrix::Identity(3, 3)});
  const HermTuple b({diag({1.0, 0.5})});
  const MembershipVerdict v = membership(b, a);
  REQUIRE(v.status == Status::NotMember);
  check_not_member_invariants(v, a, b);
}

TEST_CASE("membership is closed under composition with UCP maps") {
  Rng rng(8);
  const HermTuple a = random_tuple(2, 4, rng);
  const ChoiMatrix phi = random_ucp_choi(4, 2, 3, rng);
  const HermTuple b = apply_choi(phi, a);
  REQUIRE(membership(b, a).status == Status::Member);
  for (int trial = 0; trial < 3; ++trial) {
    const ChoiMatrix psi = random_ucp_choi(2, 2, 2, rng);
    const HermTuple c = apply_choi(psi, b);
    CHECK(membership(c, a).status == Status::Member);
  }
}

TEST_CASE("membership rejects length mismatch") {
  const HermTuple a({diag({1, -1}), diag({1, 1})});
  CHECK_THROWS_AS(membership(HermTuple::scalars({0.0}), a), DimensionError);
}

TEST_CASE("cstar_combine examples") {
  Rng rng(9);
  const HermTuple b = random_tuple(2, 3, rng);
  const CMatrix u = random_unitary(3, rng);
  const HermTuple out = cstar_combine({b}, {u});
  CHECK(tuple_distance(out, conjugate(b, u)) < 1e-12);

  const HermTuple c = random_tuple(2, 3, rng);
  const double t = 0.3;
  const HermTuple mix =
      cstar_combine({b, c}, {std::sqrt(t) * CMatrix::Identity(3, 3), std::sqrt(1 - t) * CMatrix::Identity(3, 3)});
  for (int j = 0; j < 2; ++j) CHECK((mix[j] - (t * b[j] + (1 - t) * c[j])).norm() < 1e-12);

  CHECK_THROWS_AS(cstar_combine({b}, {CMatrix(2.0 * CMatrix::Identity(3, 3))}), DimensionError);
}

TEST_CASE("cstar_combine of members is a member") {
  Rng rng(10);
  const HermTuple a = random_tuple(2, 4, rng);
  std::vector<HermTuple> members;
  for (int i = 0; i < 2; ++i) members.push_back(apply_choi(random_ucp_choi(4, 2, 2, rng), a));
  for (int trial = 0; trial < 3; ++trial) {
    const HermTuple c = cstar_combine(members, random_cstar_coefficients(2, 2, rng));
    CHECK(membership(c, a).status == Status::Member);
  }
}
