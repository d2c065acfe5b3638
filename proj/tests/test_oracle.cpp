#include "doctest.h"

#include "matrange/essential_model.hpp"
#include "matrange/simplex_dilation.hpp"
#include "matrange/suite.hpp"
#include "test_support.hpp"

using namespace matrange;

TEST_CASE("support oracle on a segment") {
  const HermTuple m({diag({0, 1}), diag({1, 0})});
  RVector x(2);
  x << 0.5, 0.5;
  CHECK(suite::support_margin(m, x) == doctest::Approx(0.0).epsilon(1e-12));
  x << 1.0, 1.0;
  CHECK(suite::support_margin(m, x) < -0.5);
  x << 0.4, 0.5;
  CHECK(suite::support_margin(m, x) < -0.05);
}

TEST_CASE("support oracle on the standard simplex") {
  const HermTuple m = Simplex::standard(2).diagonal_tuple();
  RVector x(2);
  x << 0.2, 0.2;
  CHECK(suite::support_margin(m, x) == doctest::Approx(0.2).epsilon(1e-9));
  x << 0.6, 0.6;
  CHECK(suite::support_margin(m, x) < 0.0);
  for (const RVector& p : suite::boundary_polyline(m, 72)) CHECK(std::abs(suite::support_margin(m, p)) < 1e-9);
}

TEST_CASE("oracle and membership agree on a disc-like range") {
  // W(M) for the Pauli pair is the unit disc.
  CMatrix x(2, 2), y(2, 2);
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  const HermTuple m({x, y});
  const BlockRepetitionModel model(std::nullopt, m, 1);
  Rng rng(1);
  for (int i = 0; i < 40; ++i) {
    RVector p(2);
    p << uniform(-1.3, 1.3, rng), uniform(-1.3, 1.3, rng);
    const double margin = suite::support_margin(m, p);
    CHECK(std::abs(margin - (1.0 - p.norm())) < 1e-4);
    if (std::abs(margin) < 1e-4) continue;
    const Status s = essential_membership(HermTuple::scalars({p(0), p(1)}), model).status;
    CHECK(s == (margin > 0 ? Status::Member : Status::NotMember));
  }
}

TEST_CASE("generated tuples lie in their simplex") {
  Rng rng(2);
  for (int i = 0; i < 10; ++i) {
    const Simplex s = suite::random_simplex(2, rng);
    CHECK_NOTHROW(barycentric_povm(suite::tuple_in_simplex(s, 3, 1 + i % 3, rng), s));
  }
}
