#include "matrange/ucp_choi.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "matrange/herm_vec.hpp"

namespace matrange {

ChoiMatrix::ChoiMatrix(Eigen::Index d_in, Eigen::Index q_out, CMatrix j) : d_in_(d_in), q_out_(q_out) {
  if (d_in < 1 || q_out < 1) throw DimensionError("ChoiMatrix: dimensions must be positive");
  if (j.rows() != d_in * q_out || j.cols() != d_in * q_out)
    throw DimensionError("ChoiMatrix: J must be " + std::to_string(d_in * q_out) + "x" +
                         std::to_string(d_in * q_out));
  j_ = hermitian_part(j);
}

CMatrix ChoiMatrix::image_of_identity() const {
  CMatrix p = CMatrix::Zero(q_out_, q_out_);
  for (Eigen::Index k = 0; k < d_in_; ++k) p += block(k, k);
  return p;
}

double ChoiMatrix::min_eigenvalue() const { return matrange::min_eigenvalue(j_); }

double ChoiMatrix::unitality_error() const {
  return spectral_norm(image_of_identity() - CMatrix::Identity(q_out_, q_out_));
}

CMatrix apply_choi(const ChoiMatrix& phi, const CMatrix& t) {
  if (t.rows() != phi.d_in() || t.cols() != phi.d_in())
    throw DimensionError("apply_choi: input is " + std::to_string(t.rows()) + "x" + std::to_string(t.cols()) +
                         ", map expects " + std::to_string(phi.d_in()));
  CMatrix out = CMatrix::Zero(phi.q_out(), phi.q_out());
  for (Eigen::Index k = 0; k < phi.d_in(); ++k)
    for (Eigen::Index l = 0; l < phi.d_in(); ++l)
      if (t(k, l) != Complex(0.0, 0.0)) out += t(k, l) * phi.block(k, l);
  return out;
}

HermTuple apply_choi(const ChoiMatrix& phi, const HermTuple& t) {
  std::vector<CMatrix> out;
  out.reserve(t.size());
  for (const auto& a : t) out.push_back(apply_choi(phi, a));
  return HermTuple(std::move(out));
}

ChoiMatrix choi_from_kraus(const std::vector<CMatrix>& kraus) {
  if (kraus.empty()) throw DimensionError("choi_from_kraus: no Kraus operators");
  const Eigen::Index d = kraus.front().rows(), q = kraus.front().cols();
  CMatrix j = CMatrix::Zero(d * q, d * q);
  for (const auto& k : kraus) {
    if (k.rows() != d || k.cols() != q) throw DimensionError("choi_from_kraus: inconsistent shapes");
    // vec[k*q + a] = conj(K[k, a])
    CVector v(d * q);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index a = 0; a < q; ++a) v(r * q + a) = std::conj(k(r, a));
    j += v * v.adjoint();
  }
  return ChoiMatrix(d, q, std::move(j));
}

ChoiMatrix choi_identity(Eigen::Index d) { return choi_from_kraus({CMatrix::Identity(d, d)}); }

ChoiMatrix choi_trace_map(Eigen::Index d, Eigen::Index q) {
  return ChoiMatrix(d, q, CMatrix::Identity(d * q, d * q) / static_cast<double>(d));
}

ChoiMatrix choi_of_compression(const CMatrix& x) { return choi_from_kraus({x}); }

ChoiMatrix ampliate_choi(const ChoiMatrix& phi, Eigen::Index p) {
  const Eigen::Index d = phi.d_in(), q = phi.q_out(), pq = p * q;
  CMatrix j = CMatrix::Zero(d * pq, d * pq);
  const CMatrix id = CMatrix::Identity(p, p);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l) j.block(k * pq, l * pq, pq, pq) = kron(id, CMatrix(phi.block(k, l)));
  return ChoiMatrix(d, pq, std::move(j));
}

ChoiMatrix random_ucp_choi(Eigen::Index d, Eigen::Index q, Eigen::Index rank, Rng& rng) {
  const Isometry v = random_isometry(rank * d, q, rng);
  std::vector<CMatrix> kraus;
  kraus.reserve(rank);
  for (Eigen::Index i = 0; i < rank; ++i) kraus.push_back(v.matrix().block(i * d, 0, d, q));
  return choi_from_kraus(kraus);
}

std::vector<CMatrix> kraus_decomposition(const ChoiMatrix& phi) {
  const HermEig e = herm_eig(phi.matrix());
  if (e.values(0) < -ChoiMatrix::kPsdTol)
    throw CertificateError("kraus_decomposition: Choi matrix has eigenvalue " + std::to_string(e.values(0)));
  const Eigen::Index d = phi.d_in(), q = phi.q_out();
  std::vector<CMatrix> kraus;
  for (Eigen::Index i = e.values.size() - 1; i >= 0; --i) {
    if (e.values(i) <= 1e-10) break;
    const CVector v = std::sqrt(e.values(i)) * e.vectors.col(i);
    CMatrix k(d, q);
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index a = 0; a < q; ++a) k(r, a) = std::conj(v(r * q + a));
    kraus.push_back(std::move(k));
  }
  if (kraus.empty()) throw CertificateError("kraus_decomposition: Choi matrix is zero");
  return kraus;
}

CertificateCheck verify_certificate(const ChoiMatrix& phi, const HermTuple& a, const HermTuple& b) {
  if (a.size() != b.size()) throw DimensionError("verify_certificate: tuple length mismatch");
  if (phi.d_in() != a.dim() || phi.q_out() != b.dim()) throw DimensionError("verify_certificate: shape mismatch");
  CertificateCheck c;
  c.residual = tuple_distance(apply_choi(phi, a), b);
  c.min_eigenvalue = phi.min_eigenvalue();
  c.unitality_error = phi.unitality_error();
  return c;
}

std::string to_string(Status s) {
  switch (s) {
    case Status::Member:
      return "Member";
    case Status::NotMember:
      return "NotMember";
    case Status::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Status status_from_string(const std::string& s) {
  if (s == "Member") return Status::Member;
  if (s == "NotMember") return Status::NotMember;
  if (s == "Inconclusive") return Status::Inconclusive;
  throw Error("unknown status '" + s + "'");
}

namespace {

// Affine constraints L(J) = b with L(J) = (Φ_J(I), Φ_J(A_1), ..., Φ_J(A_m)),
// written in the isometric Hermitian coordinates of herm_vec.hpp. Row r of
// block j is the functional J ↦ ⟨G_r, Φ_J(A_j)⟩ = ⟨A_j^T ⊗ G_r, J⟩.
class Feasibility {
 public:
  Feasibility(const HermTuple& b, const HermTuple& a) : d_(a.dim()), q_(b.dim()), n_(d_ * q_) {
    const std::size_t m = a.size();
    const Eigen::Index qq = q_ * q_;
    const Eigen::Index rows = static_cast<Eigen::Index>(m + 1) * qq;
    c_.resize(rows, n_ * n_);
    rhs_.resize(rows);
    functionals_.reserve(static_cast<std::size_t>(rows));
    for (std::size_t j = 0; j <= m; ++j) {
      const CMatrix t = j == 0 ? CMatrix(CMatrix::Identity(d_, d_)) : a[j - 1];
      const CMatrix target = j == 0 ? CMatrix(CMatrix::Identity(q_, q_)) : b[j - 1];
      rhs_.segment(static_cast<Eigen::Index>(j) * qq, qq) = herm_to_vec(target);
      for (Eigen::Index r = 0; r < qq; ++r) {
        const CMatrix g = vec_to_herm(RVector::Unit(qq, r), q_);
        CMatrix f = kron(CMatrix(t.transpose()), g);
        c_.row(static_cast<Eigen::Index>(j) * qq + r) = herm_to_vec(f).transpose();
        functionals_.push_back(std::move(f));
      }
    }
    Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(c_);
    pinv_ = cod.pseudoInverse();
    const RVector fitted = c_ * (pinv_ * rhs_);
    inconsistency_ = rhs_ - fitted;
  }

  Eigen::Index d() const { return d_; }
  Eigen::Index q() const { return q_; }
  Eigen::Index n() const { return n_; }
  Eigen::Index vars() const { return n_ * n_; }
  const RVector& rhs() const { return rhs_; }
  bool consistent() const { return inconsistency_.norm() <= 1e-9 * (1.0 + rhs_.norm()); }
  const RVector& inconsistency() const { return inconsistency_; }

  RVector project_affine(const RVector& x) const { return x - pinv_ * (c_ * x - rhs_); }
  RVector residual(const RVector& x) const { return c_ * x - rhs_; }
  const std::vector<CMatrix>& functionals() const { return functionals_; }

  /// Coefficients w with C^T w closest to v.
  RVector dual_of(const RVector& v) const { return pinv_.transpose() * v; }

  /// Restricts the constraints to the face {V Z V*}: row i becomes V* F_i V.
  RMatrix face_constraints(const CMatrix& v) const {
    const Eigen::Index r = v.cols();
    RMatrix out(static_cast<Eigen::Index>(functionals_.size()), r * r);
    for (std::size_t i = 0; i < functionals_.size(); ++i)
      out.row(static_cast<Eigen::Index>(i)) = herm_to_vec(v.adjoint() * functionals_[i] * v).transpose();
    return out;
  }

 private:
  Eigen::Index d_, q_, n_;
  RMatrix c_;
  RVector rhs_;
  RMatrix pinv_;
  RVector inconsistency_;
  std::vector<CMatrix> functionals_;
};

struct Candidate {
  ChoiMatrix phi;
  double residual;
};

// Rescales a PSD Choi matrix to be exactly unital: Φ' = P^{-1/2} Φ P^{-1/2},
// P = Φ(I). Returns nothing when P is singular.
std::optional<ChoiMatrix> make_unital(const CMatrix& j, Eigen::Index d, Eigen::Index q) {
  ChoiMatrix raw(d, q, j);
  const CMatrix p = raw.image_of_identity();
  if (min_eigenvalue(p) <= 1e-12) return std::nullopt;
  const CMatrix s = pd_inv_sqrt(p);
  CMatrix out(d * q, d * q);
  for (Eigen::Index k = 0; k < d; ++k)
    for (Eigen::Index l = 0; l < d; ++l) out.block(k * q, l * q, q, q) = s * raw.block(k, l) * s;
  return ChoiMatrix(d, q, std::move(out));
}

std::optional<Candidate> finish(const CMatrix& j_psd, const Feasibility& f, const HermTuple& a,
                                const HermTuple& b) {
  auto phi = make_unital(j_psd, f.d(), f.q());
  if (!phi) return std::nullopt;
  const CertificateCheck c = verify_certificate(*phi, a, b);
  if (c.min_eigenvalue < -ChoiMatrix::kPsdTol || c.unitality_error > ChoiMatrix::kUnitalTol) return std::nullopt;
  return Candidate{std::move(*phi), c.residual};
}

// Tries to turn the current iterates into an exact certificate:
//  1. the affine iterate, when it is already PSD;
//  2. the affine projection restricted to the dominant face of the PSD
//     iterate, which recovers boundary points where the iterates converge
//     slowly;
//  3. the PSD iterate itself, rescaled to be unital.
std::optional<Candidate> certify(const RVector& affine, const RVector& psd, const Feasibility& f,
                                 const HermTuple& a, const HermTuple& b, double accept) {
  std::optional<Candidate> best;
  auto offer = [&](std::optional<Candidate> c) {
    if (c && c->residual <= accept && (!best || c->residual < best->residual)) best = std::move(c);
  };
  const Eigen::Index n = f.n();

  const CMatrix x = vec_to_herm(affine, n);
  const HermEig ex = herm_eig(x);
  if (ex.values(0) >= -1e-13 * std::max(1.0, ex.values(n - 1))) offer(finish(psd_project(x), f, a, b));
  if (best && best->residual <= 1e-12) return best;

  const CMatrix y = vec_to_herm(psd, n);
  const HermEig ey = herm_eig(y);
  const double top = ey.values(n - 1);
  if (top > 0.0) {
    Eigen::Index last_rank = -1;
    for (double rel : {1e-2, 1e-4, 1e-6, 1e-8}) {
      Eigen::Index r = 0;
      while (r < n && ey.values(n - 1 - r) > rel * top) ++r;
      if (r == 0 || r == last_rank) continue;
      last_rank = r;
      const CMatrix v = ey.vectors.rightCols(r);
      const RMatrix cv = f.face_constraints(v);
      Eigen::CompleteOrthogonalDecomposition<RMatrix> cod(cv);
      const CMatrix zc = ey.values.tail(r).cast<Complex>().asDiagonal();
      RVector z = herm_to_vec(zc);
      z -= cod.solve(RVector(cv * z - f.rhs()));
      if ((cv * z - f.rhs()).norm() > 1e-10 * (1.0 + f.rhs().norm())) continue;
      const CMatrix zm = vec_to_herm(z, r);
      if (min_eigenvalue(zm) < -1e-12 * std::max(1.0, top)) continue;
      offer(finish(v * psd_project(zm) * v.adjoint(), f, a, b));
      if (best && best->residual <= 1e-12) return best;
    }
  }

  offer(finish(y, f, a, b));
  return best;
}

// Gauss–Newton on a factorization J = V V*, started from the dominant part of
// the PSD iterate. Converges quickly at low-rank boundary points (e.g. unitary
// conjugations) where the alternating projections only creep.
std::optional<Candidate> factor_polish(const RVector& psd, const Feasibility& f, const HermTuple& a,
                                       const HermTuple& b, double accept) {
  const Eigen::Index n = f.n();
  const HermEig e = herm_eig(vec_to_herm(psd, n));
  const double top = e.values(n - 1);
  if (!(top > 0.0)) return std::nullopt;
  const auto& funcs = f.functionals();
  const Eigen::Index rows = static_cast<Eigen::Index>(funcs.size());
  const double scale = 1.0 + f.rhs().norm();
  Eigen::Index last_rank = -1;
  for (double rel : {1e-2, 1e-4}) {
    Eigen::Index r = 0;
    while (r < n && e.values(n - 1 - r) > rel * top) ++r;
    if (r == last_rank) continue;
    last_rank = r;
    CMatrix v = e.vectors.rightCols(r) * e.values.tail(r).cwiseSqrt().cast<Complex>().asDiagonal();
    auto res_of = [&](const CMatrix& w) { return f.residual(herm_to_vec(CMatrix(w * w.adjoint()))); };
    RVector res = res_of(v);
    for (int it = 0; it < 50 && res.norm() > 1e-14 * scale; ++it) {
      RMatrix jac(rows, 2 * n * r);
      for (Eigen::Index i = 0; i < rows; ++i) {
        const CMatrix g = funcs[static_cast<std::size_t>(i)] * v;
        for (Eigen::Index c = 0; c < r; ++c)
          for (Eigen::Index row = 0; row < n; ++row) {
            const Eigen::Index col = 2 * (c * n + row);
            jac(i, col) = 2.0 * g(row, c).real();
            jac(i, col + 1) = 2.0 * g(row, c).imag();
          }
      }
      const RVector step = Eigen::CompleteOrthogonalDecomposition<RMatrix>(jac).solve(RVector(-res));
      CMatrix dv(n, r);
      for (Eigen::Index c = 0; c < r; ++c)
        for (Eigen::Index row = 0; row < n; ++row) {
          const Eigen::Index col = 2 * (c * n + row);
          dv(row, c) = Complex(step(col), step(col + 1));
        }
      bool moved = false;
      for (double t = 1.0; t > 1e-4; t *= 0.5) {
        const CMatrix trial = v + t * dv;
        const RVector tr = res_of(trial);
        if (tr.norm() < res.norm()) {
          v = trial;
          res = tr;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    if (res.norm() > 1e-10 * scale) continue;
    auto c = finish(v * v.adjoint(), f, a, b);
    if (c && c->residual <= accept) return c;
  }
  return std::nullopt;
}

// Norm-witness starting points derived from a separating direction w of the
// feasibility problem: with Hermitian H_j read from w, the pencil
// P_T(H) = Σ_j H_j ⊗ T_j gives R_0 = cI − H_0, R_j = −H_j, which refutes
// whenever λ_min(P_A) > λ_min(P_B).
std::vector<NormTestTuple> hints_from_dual(const RVector& w, const HermTuple& a, const HermTuple& b) {
  const Eigen::Index q = b.dim(), d = a.dim(), qq = q * q;
  const std::size_t m = a.size();
  std::vector<CMatrix> h;
  for (std::size_t j = 0; j <= m; ++j)
    h.push_back(vec_to_herm(w.segment(static_cast<Eigen::Index>(j) * qq, qq), q));
  std::vector<NormTestTuple> hints;
  for (bool transpose : {false, true}) {
    for (double sign : {1.0, -1.0}) {
      std::vector<CMatrix> hj;
      for (const auto& x : h) hj.push_back(sign * (transpose ? CMatrix(x.transpose()) : x));
      CMatrix pa = kron(hj[0], CMatrix(CMatrix::Identity(d, d)));
      for (std::size_t j = 0; j < m; ++j) pa += kron(hj[j + 1], a[j]);
      const HermEig e = herm_eig(hermitian_part(pa));
      const double c = 0.5 * (e.values(0) + e.values(e.values.size() - 1));
      std::vector<CMatrix> r;
      r.push_back(c * CMatrix::Identity(q, q) - hj[0]);
      for (std::size_t j = 0; j < m; ++j) r.push_back(-hj[j + 1]);
      hints.emplace_back(std::move(r));
    }
  }
  return hints;
}

MembershipVerdict refute(MembershipVerdict v, const RVector& dual, const HermTuple& b, const HermTuple& a,
                         const MembershipOptions& opts) {
  WitnessOptions wo;
  wo.budget = opts.witness_budget;
  wo.restarts = opts.witness_restarts;
  wo.gap_tol = opts.gap_tol;
  wo.seed = opts.seed;
  wo.stop_on_first = true;
  if (dual.allFinite() && dual.norm() > 0.0) wo.hints = hints_from_dual(dual, a, b);
  auto w = search_witness(b, finite_reference(a), wo);
  if (w) {
    v.status = Status::NotMember;
    v.witness = std::move(w);
  } else {
    v.status = Status::Inconclusive;
  }
  return v;
}

}  // namespace

MembershipVerdict membership(const HermTuple& b, const HermTuple& a, const MembershipOptions& opts) {
  if (a.size() != b.size())
    throw DimensionError("membership: A has " + std::to_string(a.size()) + " members, B has " +
                         std::to_string(b.size()));
  const Feasibility f(b, a);
  MembershipVerdict verdict;

  if (!f.consistent()) {
    // No Hermitian J satisfies the linear constraints at all.
    verdict.gap = f.inconsistency().norm();
    return refute(std::move(verdict), -f.inconsistency(), b, a, opts);
  }

  const Eigen::Index n = f.n();
  RVector x = herm_to_vec(CMatrix::Identity(n, n) / static_cast<double>(f.d()));
  RVector y = x;
  RVector p = RVector::Zero(x.size());
  RVector qv = RVector::Zero(x.size());

  constexpr int kCheckEvery = 25;
  constexpr int kStallWindow = 200;
  double gap = 0.0;
  double gap_at_window = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    // Dykstra: correction terms p and qv keep the iterates converging to the
    // nearest pair of points even when the sets do not meet.
    const RVector yp = x + p;
    y = herm_to_vec(psd_project(vec_to_herm(yp, n)));
    p = yp - y;
    const RVector xq = y + qv;
    x = f.project_affine(xq);
    qv = xq - x;
    gap = (y - x).norm();

    if (gap <= opts.gap_tol && it % kCheckEvery == 0) {
      if (auto c = certify(x, y, f, a, b, 1e-9)) {
        verdict.status = Status::Member;
        verdict.gap = gap;
        verdict.iterations = it;
        verdict.residual = c->residual;
        verdict.certificate = std::move(c->phi);
        return verdict;
      }
    }
    if (it % kStallWindow == 0) {
      if (gap > opts.gap_tol && gap > (1.0 - 1e-3) * gap_at_window) break;
      gap_at_window = gap;
    }
  }
  verdict.gap = gap;
  verdict.iterations = std::min(it, opts.max_iter);

  std::optional<Candidate> c;
  if (gap <= opts.gap_tol) c = certify(x, y, f, a, b, opts.member_tol);
  if (!c && gap <= 1e-2 * (1.0 + f.rhs().norm())) c = factor_polish(y, f, a, b, opts.member_tol);
  if (c) {
    verdict.status = Status::Member;
    verdict.residual = c->residual;
    verdict.certificate = std::move(c->phi);
    return verdict;
  }
  if (gap <= opts.gap_tol) {
    verdict.status = Status::Inconclusive;
    return verdict;
  }
  return refute(std::move(verdict), f.dual_of(y - x), b, a, opts);
}

HermTuple cstar_combine(const std::vector<HermTuple>& tuples, const std::vector<CMatrix>& l) {
  if (tuples.empty() || tuples.size() != l.size())
    throw DimensionError("cstar_combine: need one coefficient per tuple");
  const Eigen::Index q = tuples.front().dim();
  const std::size_t m = tuples.front().size();
  CMatrix completeness = CMatrix::Zero(q, q);
  for (std::size_t i = 0; i < l.size(); ++i) {
    if (tuples[i].dim() != q || tuples[i].size() != m) throw DimensionError("cstar_combine: tuple shape mismatch");
    if (l[i].rows() != q || l[i].cols() != q) throw DimensionError("cstar_combine: coefficient shape mismatch");
    completeness += l[i].adjoint() * l[i];
  }
  const double err = spectral_norm(completeness - CMatrix::Identity(q, q));
  if (err > 1e-8) throw DimensionError("cstar_combine: Σ L*L deviates from I by " + std::to_string(err));
  std::vector<CMatrix> out(m, CMatrix::Zero(q, q));
  for (std::size_t i = 0; i < l.size(); ++i)
    for (std::size_t j = 0; j < m; ++j) out[j] += l[i].adjoint() * tuples[i][j] * l[i];
  return HermTuple(std::move(out));
}

std::vector<CMatrix> random_cstar_coefficients(std::size_t count, Eigen::Index q, Rng& rng) {
  const Isometry v = random_isometry(static_cast<Eigen::Index>(count) * q, q, rng);
  std::vector<CMatrix> l;
  l.reserve(count);
  for (std::size_t i = 0; i < count; ++i) l.push_back(v.matrix().block(static_cast<Eigen::Index>(i) * q, 0, q, q));
  return l;
}

}  // namespace matrange
