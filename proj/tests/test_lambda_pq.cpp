#include "doctest.h"

#include "matrange/lambda_pq.hpp"
#include "matrange/random.hpp"
#include "matrange/simplex.hpp"
#include "matrange/spatial.hpp"
#include "test_support.hpp"

using namespace matrange;

TEST_CASE("lambda_realize with p = 1 matches realize_member") {
  Rng rng(1);
  const BlockRepetitionModel model(random_tuple(2, 2, rng), random_tuple(2, 3, rng), 4);
  const ChoiMatrix phi = random_ucp_choi(3, 2, 2, rng);
  const HermTuple b = apply_choi(phi, model.body());
  const Isometry x = lambda_realize(b, model, 1, phi);
  const Isometry v = realize_member(b, model.body(), phi);
  CHECK((x.matrix() - embed_in_body(model, v, 0)).norm() < 1e-12);
}

TEST_CASE("lambda_realize p = 2, q = 2 on a random member") {
  Rng rng(2);
  BlockRepetitionModel model(random_tuple(2, 3, rng, 4.0), random_tuple(2, 3, rng), 2);
  const ChoiMatrix phi = random_ucp_choi(3, 2, 3, rng);
  const HermTuple b = apply_choi(phi, model.body());
  CHECK_THROWS_AS(lambda_realize(b, model, 2, phi), TruncationTooSmall);
  model = model.with_level(6);
  const Isometry x = lambda_realize(b, model, 2, phi);
  CHECK(x.orthonormality_error() <= 1e-9);
  CHECK(tuple_distance(x.compress(model.materialize()), ampliate(b, 2)) <= 1e-7);
  // Dropping a tensor copy still works.
  CHECK_NOTHROW(lambda_realize(b, model, 1, phi));
}

TEST_CASE("lambda_realize finds an explicit diagonal block") {
  const HermTuple body({diag({0.3, -0.2}), diag({0.1, 0.4})});
  const BlockRepetitionModel model(std::nullopt, body, 2);
  const Isometry x = lambda_realize(body, model, 2, choi_identity(2));
  CHECK(tuple_distance(x.compress(model.materialize()), ampliate(body, 2)) <= 1e-12);
  // Coordinate embedding up to phases.
  CHECK((x.matrix().cwiseAbs() - CMatrix::Identity(4, 4).cwiseAbs()).norm() < 1e-12);
}

TEST_CASE("lambda_search recovers a planted instance") {
  Rng rng(3);
  const HermTuple b = random_tuple(2, 2, rng);
  const HermTuple junk = random_tuple(2, 2, rng);
  const HermTuple planted = direct_sum(ampliate(b, 2), junk);
  const HermTuple a = conjugate(planted, random_unitary(6, rng));
  const auto x = lambda_search(b, a, 2, {.seed = 4});
  REQUIRE(x.has_value());
  CHECK(lambda_objective(x->matrix(), a, ampliate(b, 2)) < 1e-10);
  CHECK(tuple_distance(x->compress(a), ampliate(b, 2)) <= 1e-7);
}

TEST_CASE("lambda_search examples") {
  const HermTuple a({diag({1, -1, 0.5}), diag({0, 2, 1})});
  CHECK_FALSE(lambda_search(HermTuple::scalars({3.0, 0.0}), a, 1, {.budget = 600, .restarts = 3, .seed = 5}).has_value());
  const auto x = lambda_search(HermTuple::scalars({-1.0, 2.0}), a, 1, {.seed = 6});
  REQUIRE(x.has_value());
  CHECK(std::abs(std::abs(x->matrix()(1, 0)) - 1.0) < 1e-5);
  CHECK_FALSE(lambda_search(HermTuple::scalars({0.0, 0.0}), a, 4).has_value());
}

TEST_CASE("lambda witnesses are members of the range") {
  Rng rng(7);
  const HermTuple b = random_tuple(2, 2, rng);
  const HermTuple a = conjugate(direct_sum(ampliate(b, 2), random_tuple(2, 1, rng)), random_unitary(5, rng));
  const auto x = lambda_search(b, a, 2, {.seed = 8});
  REQUIRE(x.has_value());
  CHECK(membership(x->compress(a), a).status != Status::NotMember);
}

TEST_CASE("lambda_ess_check on simplex vertices and non-members") {
  const Simplex s = Simplex::standard(2);
  const BlockRepetitionModel model(HermTuple({diag({4}), diag({4})}), s.diagonal_tuple(), 2);
  std::vector<HermTuple> probes;
  for (int k = 0; k < 3; ++k) probes.push_back(HermTuple::scalars({s.vertex(k)(0), s.vertex(k)(1)}));
  probes.push_back(HermTuple::scalars({4.0, 4.0}));
  const LambdaReport rep = lambda_ess_check(model, 2, probes, {.search = {.budget = 900, .restarts = 3}});
  for (const auto& f : rep.failures) MESSAGE(f);
  CHECK(rep.passed);
  CHECK(rep.realized == 3);
  CHECK(rep.refuted == 1);
}
