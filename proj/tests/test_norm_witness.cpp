#include "doctest.h"

#include "matrange/norm_witness.hpp"
#include "matrange/random.hpp"
#include "matrange/ucp_choi.hpp"
#include "test_support.hpp"

using namespace matrange;

TEST_CASE("check_inequality examples") {
  const HermTuple a({diag({1, -1})});
  const RefNormFn ref = finite_reference(a);

  Rng rng(1);
  const HermTuple b = random_tuple(1, 2, rng);
  const NormTestTuple id({gaussian_matrix(2, 2, rng), CMatrix::Zero(2, 2)});
  const InequalityCheck c = check_inequality(id, b, ref);
  CHECK(c.lhs == doctest::Approx(c.rhs).epsilon(1e-12));
  CHECK(c.holds);

  const InequalityCheck bad = check_inequality(NormTestTuple({CMatrix::Zero(1, 1), CMatrix::Ones(1, 1)}),
                                               HermTuple::scalars({2.0}), ref);
  CHECK(bad.lhs == doctest::Approx(2.0));
  CHECK(bad.rhs == doctest::Approx(1.0));
  CHECK_FALSE(bad.holds);

  CHECK_THROWS_AS(check_inequality(NormTestTuple::identity(3, 1), HermTuple::scalars({0.0}), ref), DimensionError);
}

TEST_CASE("members satisfy the inequality for random R") {
  Rng rng(2);
  const HermTuple a = random_tuple(2, 4, rng);
  const HermTuple b = apply_choi(random_ucp_choi(4, 2, 3, rng), a);
  const RefNormFn ref = finite_reference(a);
  for (int trial = 0; trial < 1000; ++trial) CHECK(check_inequality(random_norm_test(2, 2, rng), b, ref).holds);
}

TEST_CASE("search_witness finds the scalar witness beyond the norm") {
  const HermTuple a({diag({1, -1})});
  const auto w = search_witness(HermTuple::scalars({1.5}), finite_reference(a), {.budget = 4000, .seed = 3});
  REQUIRE(w.has_value());
  CHECK(w->gap >= 0.5 - 1e-9);
  const Witness again = evaluate_witness(w->r, HermTuple::scalars({1.5}), finite_reference(a));
  CHECK(again.lhs > again.rhs + 1e-9);
}

TEST_CASE("search_witness never refutes a member") {
  Rng rng(4);
  for (int trial = 0; trial < 3; ++trial) {
    const HermTuple a = random_tuple(2, 3, rng);
    const HermTuple b = apply_choi(random_ucp_choi(3, 2, 2, rng), a);
    CHECK_FALSE(search_witness(b, finite_reference(a), {.budget = 3000, .seed = 5}).has_value());
  }
}

TEST_CASE("search_witness on the simplex midpoint finds nothing") {
  const Simplex s = Simplex::standard(2);
  const RefNormFn ref = [&](const NormTestTuple& r) { return vertex_pencil_norm(r, s); };
  const HermTuple mid = HermTuple::scalars({1.0 / 3.0, 1.0 / 3.0});
  CHECK_FALSE(search_witness(mid, ref, {.budget = 3000, .seed = 6}).has_value());
  CHECK(membership(mid, s.diagonal_tuple()).status == Status::Member);
}

TEST_CASE("witness soundness on random refutable points") {
  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const HermTuple a = random_tuple(2, 3, rng);
    // Scaled well outside the range.
    const HermTuple b({CMatrix(3.0 * random_hermitian(2, rng)), random_hermitian(2, rng)});
    const auto w = search_witness(b, finite_reference(a), {.budget = 4000, .seed = 8});
    REQUIRE(w.has_value());
    const InequalityCheck c = check_inequality(w->r, b, finite_reference(a));
    CHECK(c.lhs > c.rhs + 1e-9);
  }
}

TEST_CASE("check_inequality is scale invariant") {
  Rng rng(9);
  const HermTuple a = random_tuple(2, 3, rng);
  const HermTuple b = random_tuple(2, 2, rng, 1.2);
  const RefNormFn ref = finite_reference(a);
  for (int trial = 0; trial < 20; ++trial) {
    const NormTestTuple r = random_norm_test(2, 2, rng);
    const double c = uniform(0.1, 10.0, rng);
    const InequalityCheck x = check_inequality(r, b, ref), y = check_inequality(r.scaled(c), b, ref);
    CHECK(std::abs(y.lhs - c * x.lhs) <= 1e-10 * c * x.lhs);
    CHECK(std::abs(y.rhs - c * x.rhs) <= 1e-10 * c * x.rhs);
    CHECK(x.holds == y.holds);
  }
}

TEST_CASE("vertex_pencil_norm examples") {
  const Simplex s = Simplex::standard(2);
  CHECK(vertex_pencil_norm(NormTestTuple::identity(2, 2), s) == doctest::Approx(1.0));
  const Simplex unit = Simplex::from_points({{0.0}, {1.0}});
  CHECK(vertex_pencil_norm(NormTestTuple({CMatrix::Zero(1, 1), CMatrix::Ones(1, 1)}), unit) == doctest::Approx(1.0));
}

TEST_CASE("vertex_pencil_norm equals the pencil norm of the diagonal tuple") {
  Rng rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const RMatrix v = gaussian_matrix(2, 3, rng).real();
    const Simplex s(v);
    const NormTestTuple r = random_norm_test(3, 2, rng);
    CHECK(std::abs(vertex_pencil_norm(r, s) - pencil_norm(r, s.diagonal_tuple())) <= 1e-10);
  }
}
