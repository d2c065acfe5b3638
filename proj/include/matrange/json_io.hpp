#ifndef MATRANGE_JSON_IO_HPP
#define MATRANGE_JSON_IO_HPP

#include <string>

#include "json.hpp"
#include "matrange/essential_model.hpp"
#include "matrange/herm_core.hpp"
#include "matrange/simplex.hpp"
#include "matrange/ucp_choi.hpp"

namespace matrange {

using Json = nlohmann::ordered_json;

/// Input that is not valid JSON or lacks a required field.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// Square matrices: {"dim": d, "re": [[...]], "im": [[...]]}. Rectangular
/// ones carry "rows" and "cols" instead of "dim". "im" may be omitted on input.
Json matrix_to_json(const CMatrix& a);
/// `field` names the value in error messages, e.g. "B[1]".
CMatrix matrix_from_json(const Json& j, const std::string& field);

Json tuple_to_json(const HermTuple& t);
/// Throws DimensionError (naming the field) for non-square or unequal sizes.
HermTuple tuple_from_json(const Json& j, const std::string& field);

Json norm_test_to_json(const NormTestTuple& r);
NormTestTuple norm_test_from_json(const Json& j, const std::string& field);

/// {"head": tuple or [], "body": tuple, "level": n}.
Json model_to_json(const BlockRepetitionModel& m);
BlockRepetitionModel model_from_json(const Json& j, const std::string& field);

/// {"vertices": [[x_1..x_m], ...]} with m+1 points.
Json simplex_to_json(const Simplex& s);
Simplex simplex_from_json(const Json& j, const std::string& field);

Json choi_to_json(const ChoiMatrix& phi);
ChoiMatrix choi_from_json(const Json& j, const std::string& field);

Json witness_to_json(const Witness& w);

/// {"status", "gap", "iterations", "certificate"?, "witness"?}.
Json verdict_to_json(const MembershipVerdict& v);

/// Parses text, turning syntax errors into FormatError.
Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::string& path);

}  // namespace matrange

#endif  // MATRANGE_JSON_IO_HPP
