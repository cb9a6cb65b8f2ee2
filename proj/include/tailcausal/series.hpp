#pragma once

#include "tailcausal/coef_matrix.hpp"

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace tailcausal {

/// Missing observations are stored as quiet NaN.
inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();
inline bool is_missing(double v) noexcept { return v != v; }

/// Calendar date (proleptic Gregorian), ISO-8601 `YYYY-MM-DD` on the wire.
struct Date {
  int year = 1970;
  int month = 1;
  int day = 1;

  auto operator<=>(const Date&) const = default;

  static Date parse(std::string_view iso);  // throws ArgumentError
  std::string iso() const;
};

/// n x d observation table, column-major, with optional per-row dates.
class SeriesTable {
 public:
  SeriesTable() = default;
  SeriesTable(std::vector<std::string> names, std::vector<std::vector<double>> columns,
              std::optional<std::vector<Date>> dates = std::nullopt);

  /// Rows of `data` become rows of the table; names default to X1..Xd.
  static SeriesTable from_matrix(const Matrix& data, std::vector<std::string> names = {});

  std::size_t rows() const noexcept { return columns_.empty() ? 0 : columns_.front().size(); }
  std::size_t cols() const noexcept { return columns_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  std::span<const double> column(std::size_t j) const { return columns_.at(j); }
  double value(std::size_t row, std::size_t col) const { return columns_.at(col).at(row); }
  bool has_dates() const noexcept { return dates_.has_value(); }
  const std::vector<Date>& dates() const;

  std::size_t column_index(std::string_view name) const;  // throws ArgumentError
  SeriesTable without_column(std::string_view name) const;
  SeriesTable select_rows(std::span<const std::size_t> rows) const;  // drops dates

  /// Rows with no missing value, as an n_complete x d matrix.
  Matrix complete_rows() const;

  friend bool operator==(const SeriesTable& a, const SeriesTable& b);

 private:
  std::vector<std::string> names_;
  std::vector<std::vector<double>> columns_;
  std::optional<std::vector<Date>> dates_;
};

/// Non-missing values of a column.
std::vector<double> present_values(std::span<const double> column);

/// Rows where both columns are present.
struct PairedSample {
  std::vector<double> x;
  std::vector<double> y;
};
PairedSample paired_complete(std::span<const double> x, std::span<const double> y);

}  // namespace tailcausal
