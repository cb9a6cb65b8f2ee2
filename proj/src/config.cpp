#include "tailcausal/config.hpp"

#include "detail/text.hpp"
#include "tailcausal/csv_io.hpp"
#include "tailcausal/error.hpp"

#include <array>
#include <charconv>
#include <utility>

namespace tailcausal {
namespace {

constexpr std::array<std::pair<Method, std::string_view>, 8> kMethods{{
    {Method::ease, "ease"},
    {Method::causev, "causev"},
    {Method::rmlm, "rmlm"},
    {Method::tree, "tree"},
    {Method::qte, "qte"},
    {Method::fit_gpd, "fit-gpd"},
    {Method::simulate, "simulate"},
    {Method::evaluate, "evaluate"},
}};

double to_double(std::string_view key, std::string_view v) {
  auto d = detail::parse_double(detail::trim(v));
  if (!d) throw ArgumentError("'" + std::string(key) + "' expects a number, got '" + std::string(v) + "'");
  return *d;
}

std::uint64_t to_uint(std::string_view key, std::string_view v) {
  v = detail::trim(v);
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) {
    throw ArgumentError("'" + std::string(key) + "' expects a nonnegative integer, got '" + std::string(v) + "'");
  }
  return out;
}

std::vector<std::string> to_list(std::string_view v) {
  std::vector<std::string> out;
  for (auto part : detail::split(v, ',')) {
    part = detail::trim(part);
    if (!part.empty()) out.emplace_back(part);
  }
  return out;
}

std::string join(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + xs[i];
  return out;
}

std::string num(double v) { return detail::format_double(v); }

}  // namespace

std::string_view to_string(Method m) noexcept {
  for (const auto& [k, name] : kMethods) {
    if (k == m) return name;
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (const auto& [k, n] : kMethods) {
    if (n == name) return k;
  }
  if (name == "fit_gpd") return Method::fit_gpd;
  throw ArgumentError("unknown method '" + std::string(name) + "'");
}

void RunConfig::set(std::string_view key, std::string_view value) {
  const std::string v(detail::trim(value));
  if (key == "method") method = parse_method(v);
  else if (key == "input") input = v;
  else if (key == "truth") truth = v;
  else if (key == "out") output = v;
  else if (key == "data-out") data_out = v;
  else if (key == "matrix-out") matrix_out = v;
  else if (key == "seed") seed = to_uint(key, v);
  else if (key == "threshold-q") threshold_q = to_double(key, v);
  else if (key == "k-frac") k_frac = to_double(key, v);
  else if (key == "tau-grid") {
    tau_grid.clear();
    for (const auto& t : to_list(v)) tau_grid.push_back(to_double(key, t));
  }
  else if (key == "u") causev_u = to_double(key, v);
  else if (key == "tau-n") tau_n = to_double(key, v);
  else if (key == "p-n") p_n = to_double(key, v);
  else if (key == "n-boot") n_boot = to_uint(key, v);
  else if (key == "structure-boot") structure_boot = to_uint(key, v);
  else if (key == "edge-threshold") edge_threshold = to_double(key, v);
  else if (key == "decluster-gap") decluster_gap = to_uint(key, v);
  else if (key == "drop-column") {
    for (auto& c : to_list(v)) drop_columns.push_back(std::move(c));
  }
  else if (key == "r") tree_r = to_double(key, v);
  else if (key == "alpha-level") tree_alpha = to_double(key, v);
  else if (key == "root") root = v;
  else if (key == "order") order = to_list(v);
  else if (key == "model") {
    if (v != "linear" && v != "maxlinear") throw ArgumentError("model must be 'linear' or 'maxlinear'");
    model = v;
  }
  else if (key == "noise") noise = v;
  else if (key == "z-noise") z_noise = v;
  else if (key == "n") n = to_uint(key, v);
  else if (key == "degree") propensity_degree = to_uint(key, v);
  else if (key == "propensity") propensity_constant = to_double(key, v);
  else throw ArgumentError("unknown setting '" + std::string(key) + "'");
}

std::vector<std::pair<std::string, std::string>> RunConfig::entries() const {
  std::vector<std::pair<std::string, std::string>> e{
      {"method", std::string(to_string(method))},
      {"input", input},
      {"truth", truth},
      {"seed", seed ? std::to_string(*seed) : ""},
      {"threshold-q", num(threshold_q)},
      {"k-frac", k_frac ? num(*k_frac) : ""},
      {"u", num(causev_u)},
      {"tau-n", num(tau_n)},
      {"p-n", num(p_n)},
      {"n-boot", std::to_string(n_boot)},
      {"structure-boot", std::to_string(structure_boot)},
      {"edge-threshold", edge_threshold ? num(*edge_threshold) : ""},
      {"decluster-gap", std::to_string(decluster_gap)},
      {"drop-column", join(drop_columns)},
      {"r", num(tree_r)},
      {"alpha-level", num(tree_alpha)},
      {"root", root},
      {"order", join(order)},
      {"model", model},
      {"noise", noise},
      {"z-noise", z_noise},
      {"n", std::to_string(n)},
      {"degree", std::to_string(propensity_degree)},
      {"propensity", propensity_constant ? num(*propensity_constant) : ""},
  };
  std::string grid;
  for (std::size_t i = 0; i < tau_grid.size(); ++i) grid += (i ? "," : "") + num(tau_grid[i]);
  e.emplace_back("tau-grid", grid);
  return e;
}

void apply_config_text(RunConfig& config, std::string_view text) {
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected 'key = value'", line_no);
    const std::string_view key = detail::trim(line.substr(0, eq));
    std::string_view value = detail::trim(line.substr(eq + 1));
    value = detail::unquote(value);
    try {
      config.set(key, value);
    } catch (const ArgumentError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
}

void apply_config_file(RunConfig& config, const std::string& path) { apply_config_text(config, read_text_file(path)); }

}  // namespace tailcausal
