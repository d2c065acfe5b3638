#include "doctest.h"

#include "matrange/essential_model.hpp"
#include "matrange/random.hpp"
#include "test_support.hpp"

using namespace matrange;

namespace {

BlockRepetitionModel outlier_model(int level) {
  return {HermTuple({diag({5})}), HermTuple({diag({1, -1})}), level};
}

}  // namespace

TEST_CASE("materialize lays out head then repeated body") {
  const BlockRepetitionModel model = outlier_model(3);
  const HermTuple a = model.materialize();
  CHECK(a.dim() == 7);
  CHECK((a[0] - diag({5, 1, -1, 1, -1, 1, -1})).norm() == 0.0);
  CHECK(model.body_offset(2) == 5);
  CHECK_THROWS_AS(BlockRepetitionModel(std::nullopt, HermTuple({diag({1})}), 0), DimensionError);
  CHECK_THROWS_AS(BlockRepetitionModel(HermTuple({diag({1}), diag({2})}), HermTuple({diag({1})}), 1), DimensionError);
}

TEST_CASE("essential_pencil_norm examples") {
  Rng rng(1);
  const HermTuple body = random_tuple(2, 3, rng);
  const BlockRepetitionModel m1(random_tuple(2, 2, rng, 4.0), body, 2);
  const BlockRepetitionModel m2(random_tuple(2, 4, rng, 7.0), body, 5);
  CHECK(essential_pencil_norm(m1, NormTestTuple::identity(1, 2)) == doctest::Approx(1.0));
  for (int trial = 0; trial < 20; ++trial) {
    const NormTestTuple r = random_norm_test(2, 2, rng);
    CHECK(essential_pencil_norm(m1, r) == essential_pencil_norm(m2, r));
    CHECK(essential_pencil_norm(m1, r) <= pencil_norm(r, m1.materialize()) + 1e-12);
    CHECK(essential_pencil_norm(m1, r) == essential_pencil_norm(m1.with_level(7), r));
  }
}

TEST_CASE("essential_membership on a segment") {
  const BlockRepetitionModel model(std::nullopt, HermTuple({diag({0, 1}), diag({1, 0})}), 2);
  CHECK(essential_membership(HermTuple::scalars({0.5, 0.5}), model).status == Status::Member);
  CHECK(essential_membership(HermTuple::scalars({1.0, 1.0}), model).status == Status::NotMember);
}

TEST_CASE("compressions of a deep body block are essential members") {
  Rng rng(2);
  const BlockRepetitionModel model(random_tuple(2, 2, rng, 3.0), random_tuple(2, 3, rng), 4);
  const HermTuple a = model.materialize();
  CMatrix x = CMatrix::Zero(model.dim(), 2);
  x.middleRows(model.body_offset(3), 3) = random_isometry(3, 2, rng).matrix();
  const HermTuple b = Isometry(x).compress(a);
  CHECK(essential_membership(b, model).status == Status::Member);
}

TEST_CASE("essential_membership ignores the head and the level") {
  Rng rng(3);
  const HermTuple body = random_tuple(2, 3, rng);
  const BlockRepetitionModel m1(random_tuple(2, 2, rng, 6.0), body, 1);
  const BlockRepetitionModel m2(std::nullopt, body, 3);
  for (int trial = 0; trial < 4; ++trial) {
    const HermTuple b = random_tuple(2, 1, rng, uniform(0.1, 1.5, rng));
    const Status s1 = essential_membership(b, m1).status;
    CHECK(s1 == essential_membership(b, m2).status);
    CHECK(s1 == essential_membership(b, m1.with_level(2)).status);
  }
}

TEST_CASE("interior_test examples") {
  const InteriorTest dep = interior_test(BlockRepetitionModel(std::nullopt, HermTuple({CMatrix::Identity(3, 3)}), 1));
  CHECK_FALSE(dep.independent);
  REQUIRE(dep.witness.has_value());
  CHECK(std::abs((*dep.witness)(0) - 1.0) < 1e-12);
  CHECK(std::abs((*dep.witness)(1) + 1.0) < 1e-12);

  const InteriorTest ind = interior_test(BlockRepetitionModel(std::nullopt, HermTuple({diag({1, -1})}), 1));
  CHECK(ind.independent);
  CHECK_FALSE(ind.witness.has_value());
}

TEST_CASE("dependent bodies force the affine relation on essential members") {
  Rng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    const CMatrix m1 = random_hermitian(3, rng);
    // M_2 = 2 M_1 − 0.5 I.
    const CMatrix m2 = 2.0 * m1 - 0.5 * CMatrix::Identity(3, 3);
    const BlockRepetitionModel model(std::nullopt, HermTuple({m1, m2}), 1);
    const InteriorTest t = interior_test(model);
    REQUIRE_FALSE(t.independent);
    const RVector& a = *t.witness;
    CHECK((a(0) * CMatrix::Identity(3, 3) + a(1) * m1 + a(2) * m2).norm() <= 1e-8);
    for (int probe = 0; probe < 3; ++probe) {
      const HermTuple b = apply_choi(random_ucp_choi(3, 2, 2, rng), model.body());
      const MembershipVerdict v = essential_membership(b, model);
      REQUIRE(v.status == Status::Member);
      CHECK(spectral_norm(CMatrix(a(0) * CMatrix::Identity(2, 2) + a(1) * b[0] + a(2) * b[1])) <= 1e-7);
    }
  }
}

TEST_CASE("preserving_perturbation cancels a matching head") {
  Rng rng(5);
  const HermTuple body = random_tuple(2, 3, rng);
  const BlockRepetitionModel model(body, body, 2);
  const PerturbationTuple k = preserving_perturbation(model);
  REQUIRE(k.head_delta.has_value());
  for (const auto& d : *k.head_delta) CHECK(d.norm() < 1e-15);
}

TEST_CASE("preserving_perturbation turns the model into repeated bodies") {
  Rng rng(6);
  for (int h : {3, 4}) {  // divisible and padded cases for d = 3
    const BlockRepetitionModel model(random_tuple(2, h, rng, 5.0), random_tuple(2, 3, rng), 2);
    const PerturbationTuple k = preserving_perturbation(model);
    const HermTuple kk = k.materialize(model);
    const HermTuple a = model.materialize();
    const BlockRepetitionModel fixed = apply_perturbation(model, k);
    const HermTuple apk = fixed.materialize();
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK((apk[j] - a[j] - kk[j]).norm() < 1e-14);
      // K lives on the head only.
      CHECK(kk[j].bottomRightCorner(6, 6).norm() == 0.0);
    }
    for (int trial = 0; trial < 20; ++trial) {
      const NormTestTuple r = random_norm_test(2, 2, rng);
      if (h % 3 == 0) CHECK(std::abs(pencil_norm(r, apk) - essential_pencil_norm(model, r)) < 1e-10);
      // A compression of copies of M cannot exceed the single-block norm.
      CHECK(pencil_norm(r, apk) <= essential_pencil_norm(model, r) + 1e-10);
    }
  }
}

TEST_CASE("head outlier: member before, refuted after the perturbation") {
  const BlockRepetitionModel model = outlier_model(2);
  const HermTuple outlier = HermTuple::scalars({5.0});
  CHECK(membership(outlier, model.materialize()).status == Status::Member);
  CHECK(essential_membership(outlier, model).status == Status::NotMember);
  const BlockRepetitionModel fixed = apply_perturbation(model, preserving_perturbation(model));
  const MembershipVerdict after = membership(outlier, fixed.materialize());
  CHECK(after.status == Status::NotMember);
  REQUIRE(after.witness.has_value());
}

TEST_CASE("essential members satisfy the inequality against finite-rank head perturbations") {
  Rng rng(7);
  const BlockRepetitionModel model(random_tuple(2, 2, rng), random_tuple(2, 3, rng), 2);
  const HermTuple b = apply_choi(random_ucp_choi(3, 2, 3, rng), model.body());
  for (int trial = 0; trial < 5; ++trial) {
    const PerturbationTuple k{random_tuple(2, 2, rng, 4.0), 2};
    const HermTuple apk = apply_perturbation(model, k).materialize();
    const RefNormFn ref = finite_reference(apk);
    for (int s = 0; s < 50; ++s) CHECK(check_inequality(random_norm_test(2, 2, rng), b, ref).holds);
  }
}

TEST_CASE("C*-convex combinations of essential members stay essential members") {
  Rng rng(8);
  const BlockRepetitionModel model(std::nullopt, random_tuple(2, 3, rng), 1);
  std::vector<HermTuple> members;
  for (int i = 0; i < 3; ++i) members.push_back(apply_choi(random_ucp_choi(3, 2, 2, rng), model.body()));
  for (int trial = 0; trial < 3; ++trial) {
    const HermTuple c = cstar_combine(members, random_cstar_coefficients(3, 2, rng));
    CHECK(essential_membership(c, model).status == Status::Member);
  }
}
