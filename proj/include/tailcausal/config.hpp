#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tailcausal {

enum class Method { ease, causev, rmlm, tree, qte, fit_gpd, simulate, evaluate };

std::string_view to_string(Method m) noexcept;
Method parse_method(std::string_view name);

/// Settings for one run. Keys in config files and CLI flags share names
/// (`threshold-q = 0.9` in a file, `--threshold-q 0.9` on the command line).
struct RunConfig {
  Method method = Method::ease;
  std::string input;
  std::string truth;
  std::string output;
  std::string data_out;    ///< simulate: CSV of the sampled table
  std::string matrix_out;  ///< optional CSV dump of the main matrix
  std::optional<std::uint64_t> seed;

  double threshold_q = 0.95;
  std::optional<double> k_frac;
  std::vector<double> tau_grid;  ///< empty means the default grid
  double causev_u = 0.9;
  double tau_n = 0.05;
  double p_n = 0.005;
  std::size_t n_boot = 300;
  std::size_t structure_boot = 0;  ///< year-bootstrap replicates of the structure distance; 0 disables
  std::optional<double> edge_threshold;
  std::size_t decluster_gap = 5;
  std::vector<std::string> drop_columns;

  double tree_r = 0.75;
  double tree_alpha = 0.9;
  std::string root;                ///< column name; default last column
  std::vector<std::string> order;  ///< rmlm: explicit well-order by column name

  std::string model = "maxlinear";
  std::string noise = "frechet:2";
  std::string z_noise;  ///< noisy RMLM when set
  std::size_t n = 10000;

  std::size_t propensity_degree = 2;
  std::optional<double> propensity_constant;

  /// Applies `key = value`; unknown keys and malformed values throw ArgumentError.
  void set(std::string_view key, std::string_view value);
  /// Canonical key/value listing (the report's config echo).
  std::vector<std::pair<std::string, std::string>> entries() const;
};

/// Reads `key = value` lines (`#` comments) into `config`.
void apply_config_text(RunConfig& config, std::string_view text);
void apply_config_file(RunConfig& config, const std::string& path);

}  // namespace tailcausal
