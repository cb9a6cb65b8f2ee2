#pragma once

#include "tailcausal/copula.hpp"
#include "tailcausal/series.hpp"
#include "tailcausal/tail_stats.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace tailcausal {

/// GPD margins and a Gumbel copula fitted on the upper quadrant
/// {x > q_x(u), y > q_y(u)}.
struct ExtremePairModel {
  TailFit margin_x;
  TailFit margin_y;
  GumbelFit copula;
  double threshold_u = 0.9;
  std::size_t n_quadrant = 0;
  std::vector<double> u;  ///< fitted-margin probabilities of the quadrant points
  std::vector<double> v;
};

inline constexpr std::size_t kMinQuadrant = 30;

ExtremePairModel fit_pair_model(std::span<const double> x, std::span<const double> y, double u = 0.9);

std::vector<double> default_tau_grid();

struct CausevScore {
  double s_xy = 0.5;  ///< score for x -> y
  double s_yx = 0.5;
  // tau-averaged pinball losses
  double score_x = 0.0;
  double score_y = 0.0;
  double score_y_given_x = 0.0;
  double score_x_given_y = 0.0;
  double theta = 1.0;
  bool saturated = false;
  std::size_t n_quadrant = 0;
};

/// S_{X->Y} = (S_Y + S_{X|Y}) / (S_X + S_{Y|X} + S_Y + S_{X|Y}). Scores are
/// pinball losses on the probability scale of the fitted margins.
CausevScore causev_score(std::span<const double> x, std::span<const double> y, double u = 0.9,
                         std::span<const double> tau_grid = {});

enum class Direction { x_to_y, y_to_x, none };
const char* to_string(Direction d) noexcept;

/// Edge x -> y when the interval lies above 0.5, y -> x when below.
Direction decide_direction(const Interval& ci) noexcept;

struct CausevDecision {
  CausevScore estimate;
  Interval ci;
  Direction direction = Direction::none;
  std::size_t n_boot = 0;
  std::size_t n_failed = 0;
  bool by_year = true;  ///< false when rows were resampled i.i.d. for lack of dates
};

struct CausevOptions {
  double u = 0.9;
  std::vector<double> tau_grid = default_tau_grid();
  std::size_t n_boot = 300;
};

/// Bootstrap decision for the pair of columns (ix, iy) of `table`. Year
/// bootstrap when dates are present; replicate r uses derive_seed(seed, r).
CausevDecision causev_direction(const SeriesTable& table, std::size_t ix, std::size_t iy, const CausevOptions& opt,
                                std::uint64_t seed);

}  // namespace tailcausal
