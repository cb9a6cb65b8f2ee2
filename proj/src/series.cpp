#include "tailcausal/series.hpp"

#include "tailcausal/error.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

namespace tailcausal {
namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

int parse_int(std::string_view s) {
  int v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return -1;
  return v;
}

bool same_value(double a, double b) { return (is_missing(a) && is_missing(b)) || a == b; }

}  // namespace

Date Date::parse(std::string_view iso) {
  if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') {
    throw ArgumentError("expected an ISO-8601 date YYYY-MM-DD, got '" + std::string(iso) + "'");
  }
  Date d{parse_int(iso.substr(0, 4)), parse_int(iso.substr(5, 2)), parse_int(iso.substr(8, 2))};
  if (d.year < 0 || d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month)) {
    throw ArgumentError("invalid calendar date '" + std::string(iso) + "'");
  }
  return d;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
  return buf;
}

SeriesTable::SeriesTable(std::vector<std::string> names, std::vector<std::vector<double>> columns,
                         std::optional<std::vector<Date>> dates)
    : names_(std::move(names)), columns_(std::move(columns)), dates_(std::move(dates)) {
  if (names_.size() != columns_.size()) throw ArgumentError("one name per column is required");
  for (const auto& c : columns_) {
    if (c.size() != columns_.front().size()) throw ArgumentError("columns have different lengths");
  }
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    if (std::all_of(columns_[j].begin(), columns_[j].end(), is_missing)) {
      throw ArgumentError("column '" + names_[j] + "' has no observations");
    }
  }
  if (dates_) {
    if (dates_->size() != rows()) throw ArgumentError("date index length differs from row count");
    for (std::size_t i = 1; i < dates_->size(); ++i) {
      if (!((*dates_)[i - 1] < (*dates_)[i])) {
        throw ArgumentError("dates must be strictly increasing (row " + std::to_string(i + 1) + ", " +
                            (*dates_)[i].iso() + ")");
      }
    }
  }
}

SeriesTable SeriesTable::from_matrix(const Matrix& data, std::vector<std::string> names) {
  const auto d = static_cast<std::size_t>(data.cols());
  if (names.empty()) {
    for (std::size_t j = 0; j < d; ++j) names.push_back("X" + std::to_string(j + 1));
  }
  std::vector<std::vector<double>> cols(d);
  for (std::size_t j = 0; j < d; ++j) {
    const auto col = data.col(static_cast<Eigen::Index>(j));
    cols[j].assign(col.data(), col.data() + col.size());
  }
  return SeriesTable(std::move(names), std::move(cols));
}

const std::vector<Date>& SeriesTable::dates() const {
  if (!dates_) throw ArgumentError("table has no date index");
  return *dates_;
}

std::size_t SeriesTable::column_index(std::string_view name) const {
  auto it = std::find(names_.begin(), names_.end(), name);
  if (it == names_.end()) throw ArgumentError("no column named '" + std::string(name) + "'");
  return static_cast<std::size_t>(it - names_.begin());
}

SeriesTable SeriesTable::without_column(std::string_view name) const {
  const std::size_t drop = column_index(name);
  SeriesTable out = *this;
  out.names_.erase(out.names_.begin() + static_cast<std::ptrdiff_t>(drop));
  out.columns_.erase(out.columns_.begin() + static_cast<std::ptrdiff_t>(drop));
  return out;
}

SeriesTable SeriesTable::select_rows(std::span<const std::size_t> rows) const {
  std::vector<std::vector<double>> picked(columns_.size());
  for (std::size_t j = 0; j < picked.size(); ++j) {
    picked[j].reserve(rows.size());
    for (std::size_t r : rows) picked[j].push_back(columns_[j].at(r));
  }
  return SeriesTable(names_, std::move(picked));
}

Matrix SeriesTable::complete_rows() const {
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < rows(); ++i) {
    bool ok = true;
    for (const auto& c : columns_) ok = ok && !is_missing(c[i]);
    if (ok) keep.push_back(i);
  }
  Matrix m(static_cast<Eigen::Index>(keep.size()), static_cast<Eigen::Index>(cols()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t j = 0; j < cols(); ++j) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) = columns_[j][keep[r]];
    }
  }
  return m;
}

bool operator==(const SeriesTable& a, const SeriesTable& b) {
  if (a.names_ != b.names_ || a.dates_ != b.dates_ || a.rows() != b.rows()) return false;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    if (!std::equal(a.columns_[j].begin(), a.columns_[j].end(), b.columns_[j].begin(), same_value)) return false;
  }
  return true;
}

std::vector<double> present_values(std::span<const double> column) {
  std::vector<double> out;
  out.reserve(column.size());
  for (double v : column) {
    if (!is_missing(v)) out.push_back(v);
  }
  return out;
}

PairedSample paired_complete(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ArgumentError("paired columns differ in length");
  PairedSample out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!is_missing(x[i]) && !is_missing(y[i])) {
      out.x.push_back(x[i]);
      out.y.push_back(y[i]);
    }
  }
  return out;
}

}  // namespace tailcausal
