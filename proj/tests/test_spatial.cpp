#include "doctest.h"

#include "matrange/random.hpp"
#include "matrange/simplex.hpp"
#include "matrange/spatial.hpp"
#include "test_support.hpp"

using namespace matrange;

TEST_CASE("sample_compressions is deterministic and validates q") {
  Rng rng(1);
  const HermTuple a = random_tuple(2, 4, rng);
  const auto s1 = sample_compressions(a, 2, 3, 11), s2 = sample_compressions(a, 2, 3, 11);
  REQUIRE(s1.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK((s1[i].x.matrix() - s2[i].x.matrix()).norm() == 0.0);
    CHECK(tuple_distance(s1[i].values, s1[i].x.compress(a)) <= 1e-10);
  }
  CHECK_THROWS_AS(sample_compressions(a, 5, 1, 0), DimensionError);
}

TEST_CASE("full-dimensional samples are unitary conjugates and stay members") {
  Rng rng(2);
  const HermTuple a = random_tuple(2, 3, rng);
  for (const auto& s : sample_compressions(a, 3, 2, 12)) {
    for (std::size_t j = 0; j < 2; ++j)
      CHECK(std::abs(max_eigenvalue(s.values[j]) - max_eigenvalue(a[j])) < 1e-10);
    CHECK(membership(s.values, a).status == Status::Member);
  }
}

TEST_CASE("sampled compressions are never refuted") {
  Rng rng(3);
  const HermTuple a = random_tuple(2, 5, rng);
  for (const auto& s : sample_compressions(a, 2, 6, 13)) CHECK(membership(s.values, a).status != Status::NotMember);
}

TEST_CASE("coordinate compressions of a diagonal tuple are principal submatrices") {
  const HermTuple a({diag({1, 2, 3}), diag({4, 5, 6})});
  CMatrix x = CMatrix::Zero(3, 2);
  x(0, 0) = 1.0;
  x(2, 1) = 1.0;
  const HermTuple b = Isometry(x).compress(a);
  CHECK((b[0] - diag({1, 3})).norm() == 0.0);
  CHECK((b[1] - diag({4, 6})).norm() == 0.0);
}

TEST_CASE("realize_member examples") {
  Rng rng(4);
  const HermTuple m = random_tuple(2, 4, rng);
  const Isometry x = random_isometry(4, 2, rng);
  const HermTuple b = x.compress(m);
  const Isometry v = realize_member(b, m, choi_of_compression(x.matrix()));
  CHECK(v.rows() == 4);
  // Equal to X up to a global phase.
  const Complex overlap = (x.matrix().adjoint() * v.matrix()).trace() / 2.0;
  CHECK((v.matrix() - overlap * x.matrix()).norm() < 1e-10);

  // Vertex of a diagonal tuple: a coordinate vector.
  const Simplex s = Simplex::standard(2);
  const HermTuple d = s.diagonal_tuple();
  const HermTuple vertex = HermTuple::scalars({1.0, 0.0});
  const MembershipVerdict verdict = membership(vertex, d);
  REQUIRE(verdict.status == Status::Member);
  const Isometry e = realize_member(vertex, d, *verdict.certificate);
  REQUIRE(e.rows() == 3);
  CHECK(std::abs(std::abs(e.matrix()(1, 0)) - 1.0) < 1e-8);
}

TEST_CASE("realize_member reproduces random members") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const HermTuple m = random_tuple(2, 3, rng);
    const ChoiMatrix phi = random_ucp_choi(3, 2, 1 + trial % 4, rng);
    const HermTuple b = apply_choi(phi, m);
    const Isometry v = realize_member(b, m, phi);
    CHECK(v.orthonormality_error() <= 1e-9);
    CHECK(tuple_distance(v.compress(ampliate(m, realization_blocks(v, m))), b) <= 1e-7);
  }
}

TEST_CASE("realize_member rejects bad certificates") {
  const HermTuple m({diag({1, -1})});
  ChoiMatrix phi = choi_identity(2);
  ChoiMatrix scaled(2, 2, 2.0 * phi.matrix());
  CHECK_THROWS_AS(realize_member(m, m, scaled), CertificateError);
  CHECK_THROWS_AS(realize_member(HermTuple({diag({0.5, 0.5})}), m, phi), CertificateError);
}

TEST_CASE("gram_schmidt and complete_to_unitary") {
  Rng rng(6);
  CMatrix cols(5, 4);
  cols << gaussian_matrix(5, 2, rng), gaussian_matrix(5, 2, rng);
  cols.col(3) = cols.col(0) + 2.0 * cols.col(1);
  const CMatrix q = gram_schmidt(cols);
  CHECK(q.cols() == 3);
  CHECK((q.adjoint() * q - CMatrix::Identity(3, 3)).norm() < 1e-12);

  const Isometry x = random_isometry(5, 2, rng);
  const CMatrix u = complete_to_unitary(x.matrix());
  CHECK((u.adjoint() * u - CMatrix::Identity(5, 5)).norm() < 1e-12);
  CHECK((u.leftCols(2) - x.matrix()).norm() < 1e-12);
}

TEST_CASE("block_compress with one target realizes it") {
  Rng rng(7);
  const BlockRepetitionModel model(random_tuple(2, 2, rng), random_tuple(2, 3, rng), 6);
  const HermTuple b = apply_choi(random_ucp_choi(3, 2, 2, rng), model.body());
  const BlockCompression c = block_compress(model, {b}, 1e-6);
  REQUIRE(c.blocks.size() == 1);
  CHECK(c.deviations[0] <= 1e-7);
  CHECK(c.z.orthonormality_error() <= 1e-9);
}

TEST_CASE("block_compress with two identical targets gives B ⊕ B") {
  Rng rng(8);
  const BlockRepetitionModel model(random_tuple(2, 3, rng, 4.0), random_tuple(2, 3, rng), 12);
  const HermTuple b = apply_choi(random_ucp_choi(3, 2, 2, rng), model.body());
  const BlockCompression c = block_compress(model, {b, b}, 1e-6);
  CHECK(c.off_diagonal <= 1e-9);
  CHECK(c.stage_orthogonality <= 1e-9);
  const HermTuple full = c.z.compress(model.materialize());
  for (std::size_t j = 0; j < 2; ++j) {
    CMatrix expect = CMatrix::Zero(4, 4);
    expect.topLeftCorner(2, 2) = b[j];
    expect.bottomRightCorner(2, 2) = b[j];
    CHECK(spectral_norm(CMatrix(full[j] - expect)) <= 1e-7);
  }
  for (const auto& blk : c.blocks) CHECK(membership(blk, model.body()).status != Status::NotMember);
}

TEST_CASE("block_compress on simplex vertices") {
  const Simplex s = Simplex::standard(2);
  BlockRepetitionModel model(HermTuple({diag({2}), diag({2})}), s.diagonal_tuple(), 1);
  std::vector<HermTuple> targets;
  for (int k = 0; k < 3; ++k) targets.push_back(HermTuple::scalars({s.vertex(k)(0), s.vertex(k)(1)}));
  CHECK_THROWS_AS(block_compress(model, targets, 1e-6), TruncationTooSmall);
  const BlockCompression c = block_compress_growing(model, targets, 1e-6);
  CHECK(model.level() >= 3);
  CHECK(c.off_diagonal <= 1e-9);
  for (double dev : c.deviations) CHECK(dev <= 1e-6);
}

TEST_CASE("block_compress rejects non-members") {
  const BlockRepetitionModel model(std::nullopt, HermTuple({diag({1, -1})}), 4);
  CHECK_THROWS_AS(block_compress(model, {HermTuple::scalars({2.0})}, 1e-6), CertificateError);
}
