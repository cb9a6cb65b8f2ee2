#pragma once

#include "tailcausal/coef_matrix.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace tailcausal::detail {

using Json = nlohmann::json;

std::string emit_report(Json doc);
Json matrix_json(const Matrix& values, const std::vector<std::string>& names);

}  // namespace tailcausal::detail
