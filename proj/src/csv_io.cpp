#include "tailcausal/csv_io.hpp"

#include "detail/text.hpp"
#include "tailcausal/error.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

namespace tailcausal {
namespace {

struct CsvRow {
  std::size_t line;
  std::vector<std::string_view> cells;
};

struct Csv {
  std::vector<std::string> header;
  std::vector<CsvRow> rows;
};

Csv split_csv(std::string_view text) {
  Csv csv;
  std::size_t line_no = 0;
  std::size_t start = 0;
  bool have_header = false;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++line_no;
    if (line.empty()) continue;
    auto cells = detail::split(line, ',');
    if (!have_header) {
      for (auto c : cells) csv.header.emplace_back(detail::unquote(c));
      have_header = true;
      continue;
    }
    if (cells.size() != csv.header.size()) {
      throw ParseError("expected " + std::to_string(csv.header.size()) + " fields, found " +
                           std::to_string(cells.size()),
                       line_no);
    }
    for (auto& c : cells) c = detail::unquote(c);
    csv.rows.push_back({line_no, std::move(cells)});
  }
  if (!have_header) throw ParseError("missing header row", 1);
  return csv;
}

bool is_missing_token(std::string_view s) { return s.empty() || s == "NA" || s == "NaN" || s == "nan" || s == "na"; }

double parse_cell(std::string_view s, std::size_t line, const std::string& column) {
  if (is_missing_token(s)) return kMissing;
  auto v = detail::parse_double(s);
  if (!v) throw ParseError("column '" + column + "': cannot parse '" + std::string(s) + "' as a number", line);
  return *v;
}

bool looks_like_date(std::string_view s) {
  try {
    Date::parse(s);
    return true;
  } catch (const ArgumentError&) {
    return false;
  }
}

}  // namespace

SeriesTable parse_series_csv(std::string_view text, const std::vector<std::string>& drop_columns) {
  const Csv csv = split_csv(text);
  if (csv.rows.empty()) throw ParseError("no data rows", 2);
  const bool dated = looks_like_date(csv.rows.front().cells.front());
  const std::size_t first = dated ? 1 : 0;

  for (const auto& name : drop_columns) {
    if (std::find(csv.header.begin() + static_cast<std::ptrdiff_t>(first), csv.header.end(), name) ==
        csv.header.end()) {
      throw ArgumentError("cannot drop unknown column '" + name + "'");
    }
  }
  std::vector<std::size_t> keep;
  std::vector<std::string> names;
  for (std::size_t c = first; c < csv.header.size(); ++c) {
    if (std::find(drop_columns.begin(), drop_columns.end(), csv.header[c]) != drop_columns.end()) continue;
    keep.push_back(c);
    names.push_back(csv.header[c]);
  }
  if (keep.empty()) throw ArgumentError("no data columns left");

  const std::size_t n = csv.rows.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<Date> dates;
  if (dated) {
    dates.reserve(n);
    for (const auto& row : csv.rows) {
      try {
        dates.push_back(Date::parse(row.cells.front()));
      } catch (const ArgumentError& e) {
        throw ParseError(e.what(), row.line);
      }
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return dates[a] < dates[b]; });
    for (std::size_t t = 1; t < n; ++t) {
      if (dates[order[t]] == dates[order[t - 1]]) {
        throw ParseError("duplicate date " + dates[order[t]].iso(), csv.rows[order[t]].line);
      }
    }
  }

  std::vector<std::vector<double>> columns(keep.size(), std::vector<double>(n));
  std::vector<Date> sorted_dates;
  for (std::size_t t = 0; t < n; ++t) {
    const CsvRow& row = csv.rows[order[t]];
    for (std::size_t k = 0; k < keep.size(); ++k) {
      columns[k][t] = parse_cell(row.cells[keep[k]], row.line, names[k]);
    }
    if (dated) sorted_dates.push_back(dates[order[t]]);
  }
  if (dated) return SeriesTable(std::move(names), std::move(columns), std::move(sorted_dates));
  return SeriesTable(std::move(names), std::move(columns));
}

SeriesTable load_series_csv(const std::filesystem::path& path, const std::vector<std::string>& drop_columns) {
  return parse_series_csv(read_text_file(path), drop_columns);
}

std::string format_series_csv(const SeriesTable& table) {
  std::string out;
  if (table.has_dates()) out += "date";
  for (std::size_t j = 0; j < table.cols(); ++j) {
    if (j > 0 || table.has_dates()) out += ',';
    out += table.names()[j];
  }
  out += '\n';
  for (std::size_t i = 0; i < table.rows(); ++i) {
    if (table.has_dates()) out += table.dates()[i].iso();
    for (std::size_t j = 0; j < table.cols(); ++j) {
      if (j > 0 || table.has_dates()) out += ',';
      const double v = table.value(i, j);
      if (!is_missing(v)) out += detail::format_double(v);
    }
    out += '\n';
  }
  return out;
}

void write_series_csv(const SeriesTable& table, const std::filesystem::path& path) {
  write_text_file(path, format_series_csv(table));
}

TreatmentSample parse_treatment_csv(std::string_view text) {
  const Csv csv = split_csv(text);
  auto find = [&](std::string_view name) -> std::size_t {
    auto it = std::find(csv.header.begin(), csv.header.end(), name);
    if (it == csv.header.end()) throw ParseError("treatment file needs a '" + std::string(name) + "' column", 1);
    return static_cast<std::size_t>(it - csv.header.begin());
  };
  const std::size_t cy = find("y");
  const std::size_t cd = find("d");
  std::vector<std::size_t> cx;
  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (c != cy && c != cd) cx.push_back(c);
  }
  const std::size_t n = csv.rows.size();
  std::vector<double> y(n);
  std::vector<int> d(n);
  Matrix x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cx.size()));
  for (std::size_t i = 0; i < n; ++i) {
    const CsvRow& row = csv.rows[i];
    y[i] = parse_cell(row.cells[cy], row.line, "y");
    const double dv = parse_cell(row.cells[cd], row.line, "d");
    if (dv != 0.0 && dv != 1.0) throw ParseError("treatment indicator must be 0 or 1", row.line);
    d[i] = static_cast<int>(dv);
    for (std::size_t k = 0; k < cx.size(); ++k) {
      const double v = parse_cell(row.cells[cx[k]], row.line, csv.header[cx[k]]);
      if (is_missing(v) || is_missing(y[i])) throw ParseError("treatment data cannot have missing cells", row.line);
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v;
    }
    if (is_missing(y[i])) throw ParseError("treatment data cannot have missing cells", row.line);
  }
  return TreatmentSample(std::move(y), std::move(d), std::move(x));
}

TreatmentSample load_treatment_csv(const std::filesystem::path& path) { return parse_treatment_csv(read_text_file(path)); }

NamedMatrix parse_matrix_csv(std::string_view text) {
  const Csv csv = split_csv(text);
  const std::size_t d = csv.header.size() - 1;
  if (csv.header.size() < 2 || csv.rows.size() != d) {
    throw ParseError("matrix file must be square with a header row and a name column", 1);
  }
  NamedMatrix out;
  out.names.assign(csv.header.begin() + 1, csv.header.end());
  out.values.resize(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < d; ++i) {
    const CsvRow& row = csv.rows[i];
    if (row.cells.front() != out.names[i]) {
      throw ParseError("row name '" + std::string(row.cells.front()) + "' does not match column order", row.line);
    }
    for (std::size_t j = 0; j < d; ++j) {
      out.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          parse_cell(row.cells[j + 1], row.line, out.names[j]);
    }
  }
  return out;
}

NamedMatrix load_matrix_csv(const std::filesystem::path& path) { return parse_matrix_csv(read_text_file(path)); }

std::string format_matrix_csv(const Matrix& values, const std::vector<std::string>& names) {
  std::string out = "name";
  for (const auto& n : names) out += "," + n;
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += names.at(static_cast<std::size_t>(i));
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out += ',';
      if (!is_missing(values(i, j))) out += detail::format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace tailcausal
