#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "opmetric/opspace.hpp"

namespace opmetric {

/// Parses a space-definition document and validates it.
///
/// Layout: {"p", "q", "basis": [[[re,im], ...], ...], "unit", "involution",
/// "norm_mode", "level1_oracle"}. Basis matrices are flat row-major lists of
/// [re, im] pairs; the involution is a list of k rows. Unknown fields are rejected.
SpaceRep load_space(std::string_view document, double rank_tolerance = kDefaultRankTolerance);

SpaceRep load_space_file(const std::string& path, double rank_tolerance = kDefaultRankTolerance);

nlohmann::json space_to_json(const SpaceRep& space);

// Shared [re, im] encoders, also used by the report writer.
nlohmann::json complex_to_json(cplx z);
cplx complex_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const CVec& v);
CVec vector_from_json(const nlohmann::json& j);
/// Flat row-major list of [re, im].
nlohmann::json matrix_to_flat_json(const CMat& m);
CMat matrix_from_flat_json(const nlohmann::json& j, int rows, int cols);
/// List of rows, each a list of [re, im].
nlohmann::json matrix_to_rows_json(const CMat& m);
CMat matrix_from_rows_json(const nlohmann::json& j);

}  // namespace opmetric
