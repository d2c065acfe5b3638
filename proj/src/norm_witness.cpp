#include "matrange/norm_witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace matrange {

RefNormFn finite_reference(HermTuple a) {
  return [a = std::move(a)](const NormTestTuple& r) { return pencil_norm(r, a); };
}

InequalityCheck check_inequality(const NormTestTuple& r, const HermTuple& b, const RefNormFn& ref) {
  if (r.q() != b.dim())
    throw DimensionError("check_inequality: R is " + std::to_string(r.q()) + "x" + std::to_string(r.q()) +
                         " but B has dimension " + std::to_string(b.dim()));
  InequalityCheck c;
  c.lhs = pencil_norm(r, b);
  c.rhs = ref(r);
  c.holds = c.lhs <= c.rhs + kInequalitySlack;
  return c;
}

Witness evaluate_witness(const NormTestTuple& r, const HermTuple& b, const RefNormFn& ref) {
  const InequalityCheck c = check_inequality(r, b, ref);
  Witness w;
  double scale = 1.0;
  if (c.rhs > 0.0) {
    scale = 1.0 / c.rhs;
  } else if (c.lhs > 0.0) {
    scale = 1.0 / c.lhs;
  }
  w.r = r.scaled(scale);
  w.lhs = c.lhs * scale;
  w.rhs = c.rhs * scale;
  w.gap = w.lhs - w.rhs;
  return w;
}

NormTestTuple random_norm_test(Eigen::Index q, std::size_t m, Rng& rng) {
  std::vector<CMatrix> c;
  c.reserve(m + 1);
  for (std::size_t j = 0; j <= m; ++j) c.push_back(gaussian_matrix(q, q, rng));
  return NormTestTuple(std::move(c));
}

namespace {

// Scale-free objective: lhs/rhs − 1, or a large value when rhs vanishes but
// lhs does not.
struct Objective {
  const HermTuple& b;
  const RefNormFn& ref;
  int evaluations = 0;

  double operator()(const NormTestTuple& r) {
    ++evaluations;
    const double lhs = pencil_norm(r, b);
    const double rhs = ref(r);
    if (rhs > 0.0) return lhs / rhs - 1.0;
    return lhs > 0.0 ? 1.0 : -std::numeric_limits<double>::infinity();
  }
};

Complex& coordinate(NormTestTuple& r, Eigen::Index q, int idx, bool& imag) {
  const int per = static_cast<int>(2 * q * q);
  const int j = idx / per;
  const int rem = idx % per;
  imag = (rem % 2) == 1;
  const int entry = rem / 2;
  return r.coeffs[j](entry / q, entry % q);
}

void nudge(Complex& z, bool imag, double delta) {
  z += imag ? Complex(0.0, delta) : Complex(delta, 0.0);
}

// Coordinate-wise line probes until the evaluation allowance runs out.
double polish(NormTestTuple& r, double value, Objective& f, int allowance) {
  const Eigen::Index q = r.q();
  const int coords = static_cast<int>(r.coeffs.size() * 2 * q * q);
  double scale = 0.0;
  for (const auto& c : r.coeffs) scale = std::max(scale, c.cwiseAbs().maxCoeff());
  double step = 0.25 * (scale > 0.0 ? scale : 1.0);
  const int stop = f.evaluations + allowance;
  while (f.evaluations < stop && step > 1e-10 * (scale > 0.0 ? scale : 1.0)) {
    bool improved = false;
    for (int idx = 0; idx < coords && f.evaluations < stop; ++idx) {
      for (double dir : {1.0, -1.0}) {
        if (f.evaluations >= stop) break;
        bool imag = false;
        Complex& z = coordinate(r, q, idx, imag);
        double delta = dir * step;
        nudge(z, imag, delta);
        double trial = f(r);
        if (trial > value) {
          value = trial;
          improved = true;
          // Keep going along this line while it pays off.
          while (f.evaluations < stop) {
            delta *= 2.0;
            nudge(z, imag, delta);
            const double next = f(r);
            if (next > value) {
              value = next;
            } else {
              nudge(z, imag, -delta);
              break;
            }
          }
          break;
        }
        nudge(z, imag, -delta);
      }
    }
    if (!improved) step *= 0.5;
  }
  return value;
}

}  // namespace

std::optional<Witness> search_witness(const HermTuple& b, const RefNormFn& ref, const WitnessOptions& opts) {
  const Eigen::Index q = b.dim();
  const std::size_t m = b.size();
  Objective f{b, ref};
  const int restarts = std::max(1, std::max(opts.restarts, static_cast<int>(opts.hints.size())));
  const int share = std::max(1, opts.budget / restarts);

  std::optional<Witness> best;
  auto consider = [&](const NormTestTuple& r) {
    Witness w = evaluate_witness(r, b, ref);
    if (w.gap > opts.gap_tol && (!best || w.gap > best->gap)) best = std::move(w);
  };

  for (int k = 0; k < restarts && f.evaluations < opts.budget; ++k) {
    NormTestTuple r;
    if (k < static_cast<int>(opts.hints.size())) {
      r = opts.hints[k];
      if (r.q() != q || r.m() != m) continue;
    } else {
      Rng rng = substream(opts.seed, static_cast<std::uint64_t>(k));
      r = random_norm_test(q, m, rng);
    }
    const double start = f(r);
    const int allowance = std::min(share, opts.budget - f.evaluations);
    const double value = polish(r, start, f, allowance);
    if (value > 0.0) consider(r);
    if (opts.stop_on_first && best) break;
  }
  return best;
}

double vertex_pencil_norm(const NormTestTuple& r, const Simplex& s) {
  if (static_cast<int>(r.m()) != s.m())
    throw DimensionError("vertex_pencil_norm: R has " + std::to_string(r.m()) + " terms, simplex is in R^" +
                         std::to_string(s.m()));
  double worst = 0.0;
  for (int k = 0; k <= s.m(); ++k) {
    CMatrix sum = r.coeffs[0];
    for (int j = 0; j < s.m(); ++j) sum += s.vertices()(j, k) * r.coeffs[j + 1];
    worst = std::max(worst, spectral_norm(sum));
  }
  return worst;
}

}  // namespace matrange
