#include "tailcausal/report.hpp"

#include "detail/report_json.hpp"
#include "detail/text.hpp"
#include "tailcausal/error.hpp"

#include <cmath>

namespace tailcausal {
namespace detail {
namespace {

void round_numbers(Json& j) {
  if (j.is_object() || j.is_array()) {
    for (auto& child : j) round_numbers(child);
  } else if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      j = nullptr;
    } else {
      j = *parse_double(format_double(v, 12)) + 0.0;  // + 0.0 folds -0 into 0
    }
  }
}

}  // namespace

std::string emit_report(Json doc) {
  round_numbers(doc);
  return doc.dump(2) + "\n";
}

Json matrix_json(const Matrix& values, const std::vector<std::string>& names) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      const double v = values(i, j);
      if (std::isfinite(v)) {
        row.push_back(v);
      } else {
        row.push_back(nullptr);
      }
    }
    rows.push_back(std::move(row));
  }
  return Json{{"names", names}, {"values", std::move(rows)}};
}

}  // namespace detail

std::string canonical_report(std::string_view json_text) {
  detail::Json doc;
  try {
    doc = detail::Json::parse(json_text);
  } catch (const detail::Json::parse_error& e) {
    throw ParseError(std::string("report is not valid JSON: ") + e.what(), 0);
  }
  return detail::emit_report(std::move(doc));
}

}  // namespace tailcausal
