#pragma once

#include "tailcausal/coef_matrix.hpp"
#include "tailcausal/qte.hpp"
#include "tailcausal/series.hpp"

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace tailcausal {

/// Comma-separated, header row mandatory. The first column holds ISO-8601
/// dates when its first value parses as one; rows are then sorted by date
/// and duplicate dates are rejected. Empty, NA and NaN cells are missing.
SeriesTable parse_series_csv(std::string_view text, const std::vector<std::string>& drop_columns = {});
SeriesTable load_series_csv(const std::filesystem::path& path, const std::vector<std::string>& drop_columns = {});

std::string format_series_csv(const SeriesTable& table);
void write_series_csv(const SeriesTable& table, const std::filesystem::path& path);

/// Columns `y`, `d` and any number of covariates (every other column, in header order).
TreatmentSample parse_treatment_csv(std::string_view text);
TreatmentSample load_treatment_csv(const std::filesystem::path& path);

/// Square matrix with a header row of names and a leading name column.
struct NamedMatrix {
  std::vector<std::string> names;
  Matrix values;
};
NamedMatrix parse_matrix_csv(std::string_view text);
NamedMatrix load_matrix_csv(const std::filesystem::path& path);
std::string format_matrix_csv(const Matrix& values, const std::vector<std::string>& names);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace tailcausal
