#pragma once

#include <string>

#include <json.hpp>

#include "positools/charclass.hpp"
#include "positools/curvature.hpp"
#include "positools/multilinear.hpp"
#include "positools/opsearch.hpp"

namespace positools {

struct DocumentInvalid : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Tensor document {n, r, entries: [{j,k,lambda,mu,re,im}]}, 1-based indices,
/// sparse entries; validation enforces the Hermitian symmetry on load.
nlohmann::json tensor_to_json(const CurvatureTensor& t);
CurvatureTensor tensor_from_json(const nlohmann::json& doc);

/// Map document {n, r, kind, payload}; payload holds the value tensor
/// entries in the same sparse format.
nlohmann::json map_to_json(const MatrixMap& h, const std::string& kind);
MatrixMap map_from_json(const nlohmann::json& doc);

nlohmann::json form_to_json(const ExteriorForm& f);

nlohmann::json verdict_to_json(const RankVerdict& v);
nlohmann::json report_to_json(const PositivityReport& r);

nlohmann::json search_record_to_json(const SearchRecord& rec);

}  // namespace positools
