#include "matrange/json_io.hpp"

#include <fstream>
#include <sstream>

namespace matrange {

namespace {

const Json& require(const Json& j, const char* key, const std::string& field) {
  if (!j.is_object()) throw FormatError(field + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw FormatError(field + ": missing \"" + key + "\"");
  return *it;
}

Eigen::Index read_size(const Json& j, const char* key, const std::string& field) {
  const Json& v = require(j, key, field);
  if (!v.is_number_integer()) throw FormatError(field + "." + key + ": expected an integer");
  const auto n = v.get<long long>();
  if (n < 1) throw DimensionError(field + "." + key + ": must be positive");
  return static_cast<Eigen::Index>(n);
}

RMatrix read_real(const Json& j, Eigen::Index rows, Eigen::Index cols, const std::string& field) {
  if (!j.is_array()) throw FormatError(field + ": expected an array of rows");
  if (static_cast<Eigen::Index>(j.size()) != rows)
    throw DimensionError(field + ": has " + std::to_string(j.size()) + " rows, expected " + std::to_string(rows));
  RMatrix out(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw FormatError(field + "[" + std::to_string(r) + "]: expected an array");
    if (static_cast<Eigen::Index>(row.size()) != cols)
      throw DimensionError(field + "[" + std::to_string(r) + "]: has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(cols));
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& x = row[static_cast<std::size_t>(c)];
      if (!x.is_number()) throw FormatError(field + "[" + std::to_string(r) + "][" + std::to_string(c) + "]: not a number");
      out(r, c) = x.get<double>();
    }
  }
  return out;
}

Json real_rows(const RMatrix& a) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < a.cols(); ++c) row.push_back(a(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<CMatrix> matrices_from_json(const Json& j, const std::string& field) {
  if (!j.is_array()) throw FormatError(field + ": expected an array of matrices");
  std::vector<CMatrix> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(matrix_from_json(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

}  // namespace

Json matrix_to_json(const CMatrix& a) {
  Json j;
  if (a.rows() == a.cols()) {
    j["dim"] = a.rows();
  } else {
    j["rows"] = a.rows();
    j["cols"] = a.cols();
  }
  j["re"] = real_rows(a.real());
  j["im"] = real_rows(a.imag());
  return j;
}

CMatrix matrix_from_json(const Json& j, const std::string& field) {
  if (!j.is_object()) throw FormatError(field + ": expected a matrix object");
  Eigen::Index rows, cols;
  if (j.contains("dim")) {
    rows = cols = read_size(j, "dim", field);
  } else {
    rows = read_size(j, "rows", field);
    cols = read_size(j, "cols", field);
  }
  const RMatrix re = read_real(require(j, "re", field), rows, cols, field + ".re");
  RMatrix im = RMatrix::Zero(rows, cols);
  if (j.contains("im")) im = read_real(j["im"], rows, cols, field + ".im");
  CMatrix out(rows, cols);
  out.real() = re;
  out.imag() = im;
  return out;
}

Json tuple_to_json(const HermTuple& t) {
  Json j = Json::array();
  for (const auto& a : t) j.push_back(matrix_to_json(a));
  return j;
}

HermTuple tuple_from_json(const Json& j, const std::string& field) {
  std::vector<CMatrix> mats = matrices_from_json(j, field);
  if (mats.empty()) throw DimensionError(field + ": tuple is empty");
  for (std::size_t i = 0; i < mats.size(); ++i) {
    const std::string name = field + "[" + std::to_string(i) + "]";
    if (mats[i].rows() != mats[i].cols()) throw DimensionError(name + ": matrix is not square");
    if (mats[i].rows() != mats[0].rows())
      throw DimensionError(name + ": dim " + std::to_string(mats[i].rows()) + " differs from " + field +
                           "[0] dim " + std::to_string(mats[0].rows()));
    const double skew = (mats[i] - mats[i].adjoint()).norm();
    if (skew > 1e-8 * (1.0 + mats[i].norm())) throw DimensionError(name + ": matrix is not Hermitian");
  }
  return HermTuple(std::move(mats));
}

Json norm_test_to_json(const NormTestTuple& r) {
  Json j = Json::array();
  for (const auto& c : r.coeffs) j.push_back(matrix_to_json(c));
  return j;
}

NormTestTuple norm_test_from_json(const Json& j, const std::string& field) {
  std::vector<CMatrix> mats = matrices_from_json(j, field);
  try {
    return NormTestTuple(std::move(mats));
  } catch (const DimensionError& e) {
    throw DimensionError(field + ": " + e.what());
  }
}

Json model_to_json(const BlockRepetitionModel& m) {
  Json j;
  j["head"] = m.head() ? tuple_to_json(*m.head()) : Json::array();
  j["body"] = tuple_to_json(m.body());
  j["level"] = m.level();
  return j;
}

BlockRepetitionModel model_from_json(const Json& j, const std::string& field) {
  const Json& head = require(j, "head", field);
  std::optional<HermTuple> h;
  if (!(head.is_array() && head.empty())) h = tuple_from_json(head, field + ".head");
  HermTuple body = tuple_from_json(require(j, "body", field), field + ".body");
  int level = 1;
  if (j.contains("level")) level = static_cast<int>(read_size(j, "level", field));
  if (h && h->size() != body.size())
    throw DimensionError(field + ".head: has " + std::to_string(h->size()) + " members, body has " +
                         std::to_string(body.size()));
  return {std::move(h), std::move(body), level};
}

Json simplex_to_json(const Simplex& s) {
  Json verts = Json::array();
  for (int k = 0; k <= s.m(); ++k) {
    Json v = Json::array();
    for (int i = 0; i < s.m(); ++i) v.push_back(s.vertices()(i, k));
    verts.push_back(std::move(v));
  }
  return Json{{"vertices", std::move(verts)}};
}

Simplex simplex_from_json(const Json& j, const std::string& field) {
  const Json& verts = require(j, "vertices", field);
  if (!verts.is_array() || verts.empty()) throw FormatError(field + ".vertices: expected a non-empty array");
  const Eigen::Index m = static_cast<Eigen::Index>(verts.size()) - 1;
  if (m < 1) throw DimensionError(field + ".vertices: need at least two vertices");
  const RMatrix rows = read_real(verts, m + 1, m, field + ".vertices");
  try {
    return Simplex(rows.transpose());
  } catch (const DimensionError& e) {
    throw DimensionError(field + ".vertices: " + e.what());
  }
}

Json choi_to_json(const ChoiMatrix& phi) {
  return Json{{"d_in", phi.d_in()}, {"q_out", phi.q_out()}, {"J", matrix_to_json(phi.matrix())}};
}

ChoiMatrix choi_from_json(const Json& j, const std::string& field) {
  const Eigen::Index d = read_size(j, "d_in", field), q = read_size(j, "q_out", field);
  CMatrix m = matrix_from_json(require(j, "J", field), field + ".J");
  if (m.rows() != d * q || m.cols() != d * q)
    throw DimensionError(field + ".J: expected dim " + std::to_string(d * q));
  return ChoiMatrix(d, q, std::move(m));
}

Json witness_to_json(const Witness& w) {
  return Json{{"R", norm_test_to_json(w.r)}, {"lhs", w.lhs}, {"rhs", w.rhs}, {"gap", w.gap}};
}

Json verdict_to_json(const MembershipVerdict& v) {
  Json j;
  j["status"] = to_string(v.status);
  j["gap"] = v.gap;
  j["iterations"] = v.iterations;
  if (v.certificate) {
    j["certificate"] = choi_to_json(*v.certificate);
    j["residual"] = v.residual;
  }
  if (v.witness) j["witness"] = witness_to_json(*v.witness);
  return j;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_json(buf.str(), path);
}

}  // namespace matrange
