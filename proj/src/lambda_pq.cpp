#include "matrange/lambda_pq.hpp"

#include <algorithm>

#include "matrange/herm_vec.hpp"
#include "matrange/random.hpp"
#include "matrange/spatial.hpp"

namespace matrange {

Isometry lambda_realize(const HermTuple& b, const BlockRepetitionModel& model, Eigen::Index p, const ChoiMatrix& phi) {
  const HermTuple target = ampliate(b, p);
  const Isometry v = realize_member(target, model.body(), ampliate_choi(phi, p));
  Isometry x(embed_in_body(model, v, 0), 1e-9);
  const double residual = tuple_distance(x.compress(model.materialize()), target);
  if (residual > 1e-7)
    throw CertificateError("lambda_realize: compression residual " + std::to_string(residual));
  return x;
}

double lambda_objective(const CMatrix& x, const HermTuple& a, const HermTuple& target) {
  double f = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) f += (x.adjoint() * a[j] * x - target[j]).squaredNorm();
  return f;
}

namespace {

CMatrix polar_isometry(const CMatrix& y) {
  Eigen::JacobiSVD<CMatrix> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

// Residuals X*X − I and X*A_jX − C_j in Hermitian coordinates.
RVector residuals(const CMatrix& x, const HermTuple& a, const HermTuple& target) {
  const Eigen::Index k = x.cols(), kk = k * k;
  RVector out(kk * static_cast<Eigen::Index>(a.size() + 1));
  out.head(kk) = herm_to_vec(CMatrix(x.adjoint() * x - CMatrix::Identity(k, k)));
  for (std::size_t j = 0; j < a.size(); ++j)
    out.segment(kk * static_cast<Eigen::Index>(j + 1), kk) = herm_to_vec(CMatrix(x.adjoint() * a[j] * x - target[j]));
  return out;
}

// Gauss–Newton on the residuals, then a polar retraction. Gradient descent
// stalls near solutions whose range barely couples to its complement (the
// objective is quartic there); Gauss–Newton still contracts geometrically.
CMatrix gauss_newton_polish(CMatrix x, const HermTuple& a, const HermTuple& target) {
  const Eigen::Index n = x.rows(), k = x.cols(), kk = k * k;
  RVector res = residuals(x, a, target);
  for (int it = 0; it < 60 && res.norm() > 1e-15; ++it) {
    RMatrix jac(res.size(), 2 * n * k);
    for (std::size_t j = 0; j <= a.size(); ++j) {
      const CMatrix w = j == 0 ? CMatrix(x.adjoint()) : CMatrix(x.adjoint() * a[j - 1]);
      for (Eigen::Index b = 0; b < k; ++b)
        for (Eigen::Index row = 0; row < n; ++row)
          for (int part = 0; part < 2; ++part) {
            CMatrix d = CMatrix::Zero(k, k);
            d.col(b) = part == 0 ? CVector(w.col(row)) : CVector(Complex(0, 1) * w.col(row));
            jac.block(kk * static_cast<Eigen::Index>(j), 2 * (b * n + row) + part, kk, 1) =
                herm_to_vec(CMatrix(d + d.adjoint()));
          }
    }
    const RVector step = Eigen::CompleteOrthogonalDecomposition<RMatrix>(jac).solve(RVector(-res));
    CMatrix dx(n, k);
    for (Eigen::Index b = 0; b < k; ++b)
      for (Eigen::Index row = 0; row < n; ++row)
        dx(row, b) = Complex(step(2 * (b * n + row)), step(2 * (b * n + row) + 1));
    bool moved = false;
    for (double t = 1.0; t > 1e-4; t *= 0.5) {
      const CMatrix trial = x + t * dx;
      const RVector tr = residuals(trial, a, target);
      if (tr.norm() < res.norm()) {
        x = trial;
        res = tr;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  return polar_isometry(x);
}

}  // namespace

std::optional<Isometry> lambda_search(const HermTuple& b, const HermTuple& a, Eigen::Index p,
                                      const LambdaSearchOptions& opts) {
  if (a.size() != b.size()) throw DimensionError("lambda_search: tuple length mismatch");
  const Eigen::Index k = p * b.dim();
  if (k > a.dim()) return std::nullopt;
  const HermTuple target = ampliate(b, p);
  const int restarts = std::max(1, opts.restarts);
  const int per_restart = std::max(1, opts.budget / restarts);

  for (int r = 0; r < restarts; ++r) {
    Rng rng = substream(opts.seed, static_cast<std::uint64_t>(r));
    CMatrix x = random_isometry(a.dim(), k, rng).matrix();
    double f = lambda_objective(x, a, target);
    double stalled_from = f;
    for (int it = 0; it < per_restart && f >= 1e-10; ++it) {
      CMatrix grad = CMatrix::Zero(a.dim(), k);
      for (std::size_t j = 0; j < a.size(); ++j) grad += 4.0 * a[j] * x * (x.adjoint() * a[j] * x - target[j]);
      double step = 1.0;
      bool moved = false;
      for (int bt = 0; bt < 40; ++bt, step *= 0.5) {
        CMatrix trial = polar_isometry(x - step * grad);
        const double ft = lambda_objective(trial, a, target);
        if (ft < f) {
          x = std::move(trial);
          f = ft;
          moved = true;
          break;
        }
      }
      if (!moved) break;
      if (it % 100 == 99) {
        // Give up on restarts that have flattened out far from zero.
        if (f > 1e-6 && f > 0.999 * stalled_from) break;
        stalled_from = f;
      }
    }
    if (f >= 1e-10 && f < 1e-3) {
      const CMatrix polished = gauss_newton_polish(x, a, target);
      const double fp = lambda_objective(polished, a, target);
      if (fp < f) {
        x = polished;
        f = fp;
      }
    }
    if (f < 1e-10) return Isometry(x, 1e-9);
  }
  return std::nullopt;
}

LambdaReport lambda_ess_check(const BlockRepetitionModel& model, Eigen::Index p, const std::vector<HermTuple>& probes,
                              const LambdaCheckOptions& opts) {
  LambdaReport rep;
  const PerturbationTuple k = preserving_perturbation(model);
  const BlockRepetitionModel small = apply_perturbation(model.with_level(1), k);
  int level = 1;
  while (small.with_level(level).dim() < p * (probes.empty() ? 1 : probes.front().dim())) ++level;
  const HermTuple a_plus_k_small = small.with_level(level).materialize();

  for (std::size_t i = 0; i < probes.size(); ++i) {
    const HermTuple& b = probes[i];
    MembershipOptions mo = opts.membership;
    mo.seed = opts.membership.seed + i;
    const MembershipVerdict ess = essential_membership(b, model, mo);
    const std::string tag = "probe " + std::to_string(i) + ": ";
    if (ess.status == Status::Member) {
      try {
        // Grow the truncation until the realization fits.
        BlockRepetitionModel target = apply_perturbation(model, k);
        for (;;) {
          try {
            const Isometry x = lambda_realize(b, target, p, *ess.certificate);
            const double res = tuple_distance(x.compress(target.materialize()), ampliate(b, p));
            rep.worst_residual = std::max(rep.worst_residual, res);
            if (res > 1e-7 || x.orthonormality_error() > 1e-9) rep.failures.push_back(tag + "residual too large");
            ++rep.realized;
            break;
          } catch (const TruncationTooSmall& e) {
            int lvl = target.level();
            while (lvl < e.required) lvl *= 2;
            target = target.with_level(lvl);
          }
        }
      } catch (const Error& e) {
        rep.failures.push_back(tag + "realization failed: " + e.what());
      }
    } else if (ess.status == Status::NotMember) {
      LambdaSearchOptions so = opts.search;
      so.seed = opts.search.seed + i;
      if (lambda_search(b, a_plus_k_small, p, so)) rep.failures.push_back(tag + "search found a witness for a non-member");
      const MembershipVerdict v = membership(b, a_plus_k_small, mo);
      if (v.status != Status::NotMember) rep.failures.push_back(tag + "oracle did not refute against A+K (" + to_string(v.status) + ")");
      else ++rep.refuted;
    } else {
      ++rep.skipped;
    }
  }
  rep.passed = rep.failures.empty();
  return rep;
}

}  // namespace matrange
