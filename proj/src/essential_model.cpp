#include "matrange/essential_model.hpp"

#include <cmath>

#include "matrange/herm_vec.hpp"

namespace matrange {

BlockRepetitionModel::BlockRepetitionModel(std::optional<HermTuple> head, HermTuple body, int level)
    : head_(std::move(head)), body_(std::move(body)), level_(level) {
  if (body_.empty()) throw DimensionError("model: body tuple is empty");
  if (level_ < 1) throw DimensionError("model: level must be at least 1");
  if (head_ && head_->size() != body_.size())
    throw DimensionError("model: head has " + std::to_string(head_->size()) + " members, body has " +
                         std::to_string(body_.size()));
}

HermTuple BlockRepetitionModel::materialize() const {
  const Eigen::Index n = dim(), d = body_dim(), h = head_dim();
  std::vector<CMatrix> out;
  out.reserve(m());
  for (std::size_t j = 0; j < m(); ++j) {
    CMatrix a = CMatrix::Zero(n, n);
    if (head_) a.topLeftCorner(h, h) = (*head_)[j];
    for (int b = 0; b < level_; ++b) a.block(h + b * d, h + b * d, d, d) = body_[j];
    out.push_back(std::move(a));
  }
  return HermTuple(std::move(out));
}

HermTuple PerturbationTuple::materialize(const BlockRepetitionModel& model) const {
  const Eigen::Index n = model.dim();
  std::vector<CMatrix> out(model.m(), CMatrix::Zero(n, n));
  if (head_delta) {
    const Eigen::Index h = head_delta->dim();
    for (std::size_t j = 0; j < model.m(); ++j) out[j].topLeftCorner(h, h) = (*head_delta)[j];
  }
  return HermTuple(std::move(out));
}

BlockRepetitionModel apply_perturbation(const BlockRepetitionModel& model, const PerturbationTuple& k) {
  if (!k.head_delta) return model;
  if (!model.head() || model.head_dim() != k.head_delta->dim())
    throw DimensionError("apply_perturbation: perturbation does not match the head block");
  std::vector<CMatrix> head;
  for (std::size_t j = 0; j < model.m(); ++j) head.push_back((*model.head())[j] + (*k.head_delta)[j]);
  return {HermTuple(std::move(head)), model.body(), model.level()};
}

double essential_pencil_norm(const BlockRepetitionModel& model, const NormTestTuple& r) {
  return pencil_norm(r, model.body());
}

RefNormFn essential_reference(const BlockRepetitionModel& model) { return finite_reference(model.body()); }

MembershipVerdict essential_membership(const HermTuple& b, const BlockRepetitionModel& model,
                                       const MembershipOptions& opts) {
  return membership(b, model.body(), opts);
}

InteriorTest interior_test(const BlockRepetitionModel& model) {
  const HermTuple& body = model.body();
  const Eigen::Index d = body.dim();
  const Eigen::Index cols = static_cast<Eigen::Index>(body.size()) + 1;
  RMatrix design(d * d, cols);
  design.col(0) = herm_to_vec(CMatrix::Identity(d, d));
  for (std::size_t j = 0; j < body.size(); ++j) design.col(static_cast<Eigen::Index>(j) + 1) = herm_to_vec(body[j]);

  // Gram = design^T design; its eigenvalues are the squared singular values.
  Eigen::JacobiSVD<RMatrix> svd(design, Eigen::ComputeFullV);
  const RVector& s = svd.singularValues();
  InteriorTest out;
  const double top = s(0) * s(0);
  const double bottom = s.size() == cols ? s(cols - 1) * s(cols - 1) : 0.0;
  out.ratio = top > 0.0 ? bottom / top : 0.0;
  out.independent = bottom > 1e-10 * top;
  if (!out.independent) {
    RVector a = svd.matrixV().col(cols - 1);
    const double peak = a.cwiseAbs().maxCoeff();
    Eigen::Index lead = 0;
    while (std::abs(a(lead)) < peak - 1e-12) ++lead;
    a /= a(lead);
    out.witness = a;
  }
  return out;
}

PerturbationTuple preserving_perturbation(const BlockRepetitionModel& model) {
  PerturbationTuple k;
  const Eigen::Index h = model.head_dim(), d = model.body_dim();
  if (h == 0) return k;
  const Eigen::Index copies = (h + d - 1) / d;
  std::vector<CMatrix> delta;
  for (std::size_t j = 0; j < model.m(); ++j) {
    const CMatrix tiled = kron(CMatrix(CMatrix::Identity(copies, copies)), model.body()[j]);
    delta.push_back(tiled.topLeftCorner(h, h) - (*model.head())[j]);
  }
  k.head_delta = HermTuple(std::move(delta));
  k.rank_bound = static_cast<int>(h);
  return k;
}

}  // namespace matrange
