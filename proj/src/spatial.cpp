#include "matrange/spatial.hpp"

#include <algorithm>
#include <cmath>

#include "matrange/random.hpp"

namespace matrange {

std::vector<CompressionSample> sample_compressions(const HermTuple& a, Eigen::Index q, int count,
                                                   std::uint64_t seed) {
  if (q < 1 || q > a.dim())
    throw DimensionError("sample_compressions: q = " + std::to_string(q) + " exceeds dimension " +
                         std::to_string(a.dim()));
  std::vector<CompressionSample> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) {
    Rng rng = substream(seed, static_cast<std::uint64_t>(i));
    Isometry x = random_isometry(a.dim(), q, rng);
    HermTuple values = x.compress(a);
    out.push_back({std::move(x), std::move(values)});
  }
  return out;
}

Isometry realize_member(const HermTuple& b, const HermTuple& body, const ChoiMatrix& phi) {
  if (b.size() != body.size()) throw DimensionError("realize_member: tuple length mismatch");
  if (phi.d_in() != body.dim() || phi.q_out() != b.dim())
    throw DimensionError("realize_member: certificate shape does not match the tuples");
  if (!phi.is_ucp())
    throw CertificateError("realize_member: certificate is not UCP (min eigenvalue " +
                           std::to_string(phi.min_eigenvalue()) + ", unitality error " +
                           std::to_string(phi.unitality_error()) + ")");
  const auto kraus = kraus_decomposition(phi);
  const Eigen::Index d = body.dim(), q = b.dim();
  const Eigen::Index r = static_cast<Eigen::Index>(kraus.size());
  CMatrix v(r * d, q);
  for (Eigen::Index i = 0; i < r; ++i) v.block(i * d, 0, d, q) = kraus[static_cast<std::size_t>(i)];
  // Dropped eigenvalues leave V*V = I only up to ~1e-10; restore exactness.
  v = v * pd_inv_sqrt(v.adjoint() * v);
  Isometry iso(std::move(v), 1e-9);

  const HermTuple realized = iso.compress(ampliate(body, r));
  const double residual = tuple_distance(realized, b);
  if (residual > 1e-7)
    throw CertificateError("realize_member: certificate reproduces B only to " + std::to_string(residual));
  return iso;
}

CMatrix embed_in_body(const BlockRepetitionModel& model, const Isometry& v, int first_block) {
  const Eigen::Index d = model.body_dim();
  const int blocks = static_cast<int>(v.rows() / d);
  if (first_block + blocks > model.level()) throw TruncationTooSmall(model.level(), first_block + blocks);
  CMatrix out = CMatrix::Zero(model.dim(), v.cols());
  out.middleRows(model.body_offset(first_block), v.rows()) = v.matrix();
  return out;
}

CMatrix gram_schmidt(const CMatrix& columns, double drop_tol) {
  CMatrix basis(columns.rows(), 0);
  for (Eigen::Index c = 0; c < columns.cols(); ++c) {
    CVector v = columns.col(c);
    const double scale = std::max(1.0, v.norm());
    // Two passes of modified Gram–Schmidt for stability.
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index k = 0; k < basis.cols(); ++k) v -= basis.col(k).dot(v) * basis.col(k);
    const double nrm = v.norm();
    if (nrm <= drop_tol * scale) continue;
    basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
    basis.col(basis.cols() - 1) = v / nrm;
  }
  return basis;
}

CMatrix complete_to_unitary(const CMatrix& x, double drop_tol) {
  const Eigen::Index n = x.rows();
  CMatrix all(n, x.cols() + n);
  all << x, CMatrix::Identity(n, n);
  CMatrix u = gram_schmidt(all, drop_tol);
  if (u.cols() != n) throw SolverError("complete_to_unitary: completion lost rank");
  return u;
}

BlockCompression block_compress(const BlockRepetitionModel& model, const std::vector<HermTuple>& targets,
                                double eps, const MembershipOptions& opts) {
  if (targets.empty()) throw DimensionError("block_compress: no targets");
  const Eigen::Index p = targets.front().dim();
  for (const auto& t : targets)
    if (t.dim() != p || t.size() != model.m()) throw DimensionError("block_compress: targets must share shape");

  // Stinespring realizations of every target against the body.
  std::vector<Isometry> realizations;
  int required = 0;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    const MembershipVerdict v = essential_membership(targets[i], model, opts);
    if (v.status != Status::Member || !v.certificate)
      throw CertificateError("block_compress: target " + std::to_string(i) + " is not an essential member (" +
                             to_string(v.status) + ")");
    realizations.push_back(realize_member(targets[i], model.body(), *v.certificate));
    required += realization_blocks(realizations.back(), model.body());
  }
  if (required > model.level()) throw TruncationTooSmall(model.level(), required);

  const HermTuple a = model.materialize();
  const Eigen::Index n = model.dim();
  BlockCompression out;

  CMatrix x = embed_in_body(model, realizations[0], 0);
  int used = realization_blocks(realizations[0], model.body());
  for (std::size_t i = 1; i < targets.size(); ++i) {
    // U extends X to a unitary; in U coordinates X spans the first columns.
    const CMatrix u = complete_to_unitary(x);
    const Eigen::Index k = x.cols();
    CMatrix spanning(n, k * static_cast<Eigen::Index>(a.size() + 1));
    spanning.leftCols(k) = CMatrix::Identity(n, k);
    for (std::size_t j = 0; j < a.size(); ++j)
      spanning.middleCols(k * static_cast<Eigen::Index>(j + 1), k) = (u.adjoint() * a[j] * u).leftCols(k);
    const CMatrix l = gram_schmidt(spanning);
    // Complement of L in U coordinates, mapped back: Y = U|_{L^⊥}.
    CMatrix all(n, l.cols() + n);
    all << l, CMatrix::Identity(n, n);
    const CMatrix lperp = gram_schmidt(all).rightCols(n - l.cols());
    const CMatrix y = u * lperp;

    out.stage_orthogonality = std::max(out.stage_orthogonality, spectral_norm(CMatrix(y.adjoint() * x)));
    for (const auto& aj : a)
      out.stage_orthogonality = std::max(out.stage_orthogonality, spectral_norm(CMatrix(y.adjoint() * aj * x)));

    // The next realization lives on untouched body blocks, hence inside L^⊥.
    const CMatrix w = embed_in_body(model, realizations[i], used);
    used += realization_blocks(realizations[i], model.body());
    const CMatrix x2 = y.adjoint() * w;
    const double leak = spectral_norm(CMatrix(y * x2 - w));
    if (leak > 1e-9) throw SolverError("block_compress: fresh blocks are not orthogonal to L (" + std::to_string(leak) + ")");

    CMatrix grown(n, k + p);
    grown << x, y * x2;
    x = std::move(grown);
  }

  out.z = Isometry(x, 1e-9);
  out.blocks_used = used;
  const std::size_t count = targets.size();
  for (std::size_t i = 0; i < count; ++i) {
    const CMatrix zi = x.middleCols(static_cast<Eigen::Index>(i) * p, p);
    HermTuple block = conjugate(a, zi);
    const double dev = tuple_distance(block, targets[i]);
    if (dev > eps)
      throw CertificateError("block_compress: block " + std::to_string(i) + " deviates by " + std::to_string(dev));
    out.deviations.push_back(dev);
    out.blocks.push_back(std::move(block));
    for (std::size_t k = 0; k < count; ++k) {
      if (k == i) continue;
      const CMatrix zk = x.middleCols(static_cast<Eigen::Index>(k) * p, p);
      for (const auto& aj : a) out.off_diagonal = std::max(out.off_diagonal, spectral_norm(CMatrix(zi.adjoint() * aj * zk)));
    }
  }
  return out;
}

BlockCompression block_compress_growing(BlockRepetitionModel& model, const std::vector<HermTuple>& targets,
                                        double eps, const MembershipOptions& opts) {
  for (;;) {
    try {
      return block_compress(model, targets, eps, opts);
    } catch (const TruncationTooSmall& e) {
      int level = model.level();
      while (level < e.required) level *= 2;
      model = model.with_level(level);
    }
  }
}

}  // namespace matrange
