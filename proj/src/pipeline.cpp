#include "tailcausal/pipeline.hpp"

#include "detail/report_json.hpp"
#include "tailcausal/causev.hpp"
#include "tailcausal/csv_io.hpp"
#include "tailcausal/dag_io.hpp"
#include "tailcausal/ease.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/eval.hpp"
#include "tailcausal/qte.hpp"
#include "tailcausal/random.hpp"
#include "tailcausal/report.hpp"
#include "tailcausal/rmlm_discovery.hpp"
#include "tailcausal/scm.hpp"
#include "tailcausal/tail_stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

namespace tailcausal {
namespace {

using detail::Json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::Index ix(std::size_t v) { return static_cast<Eigen::Index>(v); }

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw ArgumentError(std::string(to_string(cfg.method)) + " is stochastic and needs --seed");
  return *cfg.seed;
}

void require_input(const RunConfig& cfg) {
  if (cfg.input.empty()) throw ArgumentError("--input is required");
}

bool is_csv(const std::string& path) { return path.size() >= 4 && path.substr(path.size() - 4) == ".csv"; }

std::vector<std::string> default_names(std::size_t d) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < d; ++j) names.push_back("X" + std::to_string(j + 1));
  return names;
}

std::size_t name_index(const std::vector<std::string>& names, const std::string& name) {
  auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw ArgumentError("unknown column '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

// Reachability from a DAG file (labels follow column order) or a named matrix CSV.
CoefMatrix load_structure(const std::string& path, const std::vector<std::string>& names) {
  if (is_csv(path)) {
    const NamedMatrix m = load_matrix_csv(path);
    if (m.names.size() != names.size()) throw ArgumentError(path + ": matrix size does not match the data columns");
    CoefMatrix out{CoefKind::reachability, Matrix::Identity(ix(names.size()), ix(names.size()))};
    for (std::size_t i = 0; i < names.size(); ++i) {
      for (std::size_t j = 0; j < names.size(); ++j) {
        if (i != j) {
          const double v = m.values(ix(name_index(m.names, names[i])), ix(name_index(m.names, names[j])));
          out.values(ix(i), ix(j)) = v != 0.0 && !std::isnan(v) ? 1.0 : 0.0;
        }
      }
    }
    return out;
  }
  const DagFile f = load_dag_file(path);
  if (f.dag.size() != names.size()) {
    throw ArgumentError(path + ": DAG has " + std::to_string(f.dag.size()) + " vertices, data has " +
                        std::to_string(names.size()) + " columns");
  }
  return reachability(f.dag);
}

std::optional<CoefMatrix> load_truth(const RunConfig& cfg, const std::vector<std::string>& names) {
  if (cfg.truth.empty()) return std::nullopt;
  return load_structure(cfg.truth, names);
}

Json names_of(const std::vector<Vertex>& order, const std::vector<std::string>& names) {
  Json out = Json::array();
  for (Vertex v : order) out.push_back(names[v]);
  return out;
}

Json comparison_json(const CoefMatrix& est, const CoefMatrix& truth, const std::vector<std::string>& names) {
  const StructureComparison c = reachability_distance(est, truth);
  Json mism = Json::array();
  for (const Edge& e : c.mismatches) mism.push_back(Json::array({names[e.from], names[e.to]}));
  return Json{{"distance", c.distance}, {"mismatches", std::move(mism)}};
}

Json interval_json(const Interval& ci) { return Json{{"lower", ci.lower}, {"upper", ci.upper}}; }

// comparison block plus, on request, the year-bootstrap interval of the distance
void add_structure(Json& result, const RunConfig& cfg, const SeriesTable& table, const CoefMatrix& estimate,
                   const StructurePipeline& pipeline) {
  const auto truth = load_truth(cfg, table.names());
  if (!truth) return;
  Json cmp = comparison_json(estimate, *truth, table.names());
  if (cfg.structure_boot > 0) {
    const StructureCi ci = bootstrap_structure_ci(pipeline, table, *truth, cfg.structure_boot, require_seed(cfg));
    cmp["bootstrap"] = Json{{"ci", interval_json(ci.ci)}, {"n_boot", cfg.structure_boot}, {"n_failed", ci.n_failed}};
  }
  result["comparison"] = std::move(cmp);
}

SeriesTable load_table(const RunConfig& cfg) {
  require_input(cfg);
  return load_series_csv(cfg.input, cfg.drop_columns);
}

void dump_matrix(const RunConfig& cfg, const Matrix& m, const std::vector<std::string>& names) {
  if (!cfg.matrix_out.empty()) write_text_file(cfg.matrix_out, format_matrix_csv(m, names));
}

// ---- ease

struct EaseResult {
  GammaMatrix gamma;
  std::vector<Vertex> order;
  CoefMatrix reach;
};

EaseResult run_ease_on(const RunConfig& cfg, const SeriesTable& table) {
  EaseResult r;
  r.gamma = gamma_matrix(table, cfg.k_frac.value_or(0.0));
  r.order = ease_order(r.gamma);
  r.reach = ease_reachability(r.gamma, r.order, cfg.edge_threshold.value_or(0.1));
  return r;
}

Json method_ease(const RunConfig& cfg, Json& meta) {
  const SeriesTable table = load_table(cfg);
  const EaseResult r = run_ease_on(cfg, table);
  meta["n_rows"] = table.rows();
  Json result{{"gamma", detail::matrix_json(r.gamma.gamma.values, table.names())},
              {"order", names_of(r.order, table.names())},
              {"reachability", detail::matrix_json(r.reach.values, table.names())}};
  add_structure(result, cfg, table, r.reach,
                [&](const SeriesTable& t, std::uint64_t) { return run_ease_on(cfg, t).reach; });
  dump_matrix(cfg, r.reach.values, table.names());
  return result;
}

// ---- rmlm

struct RmlmResult {
  SpectralEstimate sigma;
  std::vector<Vertex> order;
  MlReconstruction rec;
  CoefMatrix reach;
};

RmlmResult run_rmlm_on(const RunConfig& cfg, const SeriesTable& table) {
  RmlmResult r;
  r.sigma = spectral_scalings(table, cfg.k_frac.value_or(kDefaultSpectralKFrac));
  if (!cfg.order.empty()) {
    if (cfg.order.size() != table.cols()) throw ArgumentError("--order must list every column once");
    for (const auto& name : cfg.order) r.order.push_back(name_index(table.names(), name));
  } else {
    r.order = ease_order(gamma_matrix(table));
  }
  r.rec = reconstruct_ml_from_scalings(r.sigma, r.order);
  r.reach = rmlm_reachability(r.rec.bbar, cfg.edge_threshold.value_or(0.05));
  return r;
}

Json method_rmlm(const RunConfig& cfg, Json& meta) {
  const SeriesTable table = load_table(cfg);
  const RmlmResult r = run_rmlm_on(cfg, table);
  meta["n_rows"] = table.rows();
  Json result{{"scalings", detail::matrix_json(r.sigma.sigma.values, table.names())},
              {"k_exceed", r.sigma.k_exceed},
              {"order", names_of(r.order, table.names())},
              {"bbar", detail::matrix_json(r.rec.bbar.values, table.names())},
              {"clipped_mass", r.rec.clipped_mass},
              {"reachability", detail::matrix_json(r.reach.values, table.names())}};
  add_structure(result, cfg, table, r.reach,
                [&](const SeriesTable& t, std::uint64_t) { return run_rmlm_on(cfg, t).reach; });
  dump_matrix(cfg, r.reach.values, table.names());
  return result;
}

// ---- tree

struct TreeResult {
  TreeScoreMatrix w;
  Vertex root = 0;
  Dag tree;
  CoefMatrix reach;
};

TreeResult run_tree_on(const RunConfig& cfg, const SeriesTable& table) {
  TreeResult r;
  r.w = tree_scores(table, cfg.tree_alpha, cfg.tree_r);
  r.root = cfg.root.empty() ? table.cols() - 1 : name_index(table.names(), cfg.root);
  r.tree = min_arborescence(r.w, r.root);
  r.reach = reachability(r.tree);
  return r;
}

Json method_tree(const RunConfig& cfg, Json& meta) {
  const SeriesTable table = load_table(cfg);
  const TreeResult r = run_tree_on(cfg, table);
  meta["n_rows"] = table.rows();
  Json edges = Json::array();
  for (const Edge& e : r.tree.edges()) edges.push_back(Json::array({table.names()[e.from], table.names()[e.to]}));
  Json result{{"scores", detail::matrix_json(r.w.w.values, table.names())},
              {"root", table.names()[r.root]},
              {"edges", std::move(edges)},
              {"reachability", detail::matrix_json(r.reach.values, table.names())}};
  add_structure(result, cfg, table, r.reach,
                [&](const SeriesTable& t, std::uint64_t) { return run_tree_on(cfg, t).reach; });
  dump_matrix(cfg, r.reach.values, table.names());
  return result;
}

// ---- causev

struct CausevResult {
  Matrix score;
  Matrix lower;
  Matrix upper;
  CoefMatrix reach;
  Json pairs = Json::array();
  bool by_year = true;
};

CausevResult run_causev_on(const RunConfig& cfg, const SeriesTable& table, std::uint64_t seed) {
  const std::size_t d = table.cols();
  CausevOptions opt;
  opt.u = cfg.causev_u;
  if (!cfg.tau_grid.empty()) opt.tau_grid = cfg.tau_grid;
  opt.n_boot = cfg.n_boot;

  CausevResult r;
  r.score = Matrix::Constant(ix(d), ix(d), kNaN);
  r.lower = r.score;
  r.upper = r.score;
  r.reach = CoefMatrix{CoefKind::reachability, Matrix::Identity(ix(d), ix(d))};
  std::uint64_t pair = 0;
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j, ++pair) {
      CausevDecision dec;
      try {
        dec = causev_direction(table, i, j, opt, derive_seed(seed, pair));
      } catch (const Error& e) {
        throw Error("pair (" + table.names()[i] + ", " + table.names()[j] + "): " + e.what());
      }
      r.by_year = r.by_year && dec.by_year;
      r.score(ix(i), ix(j)) = dec.estimate.s_xy;
      r.score(ix(j), ix(i)) = dec.estimate.s_yx;
      r.lower(ix(i), ix(j)) = dec.ci.lower;
      r.upper(ix(i), ix(j)) = dec.ci.upper;
      r.lower(ix(j), ix(i)) = 1.0 - dec.ci.upper;
      r.upper(ix(j), ix(i)) = 1.0 - dec.ci.lower;
      if (dec.direction == Direction::x_to_y) r.reach.values(ix(i), ix(j)) = 1.0;
      if (dec.direction == Direction::y_to_x) r.reach.values(ix(j), ix(i)) = 1.0;
      r.pairs.push_back(Json{{"x", table.names()[i]},
                             {"y", table.names()[j]},
                             {"score", dec.estimate.s_xy},
                             {"ci", interval_json(dec.ci)},
                             {"decision", to_string(dec.direction)},
                             {"theta", dec.estimate.theta},
                             {"theta_saturated", dec.estimate.saturated},
                             {"n_quadrant", dec.estimate.n_quadrant},
                             {"n_failed", dec.n_failed}});
    }
  }
  return r;
}

Json method_causev(const RunConfig& cfg, Json& meta) {
  const SeriesTable table = load_table(cfg);
  const CausevResult r = run_causev_on(cfg, table, require_seed(cfg));
  meta["n_rows"] = table.rows();
  if (!r.by_year) meta["warnings"].push_back("no date index: bootstrap resampled rows i.i.d.");
  Json result{{"score", detail::matrix_json(r.score, table.names())},
              {"ci_lower", detail::matrix_json(r.lower, table.names())},
              {"ci_upper", detail::matrix_json(r.upper, table.names())},
              {"pairs", r.pairs},
              {"reachability", detail::matrix_json(r.reach.values, table.names())}};
  add_structure(result, cfg, table, r.reach,
                [&](const SeriesTable& t, std::uint64_t s) { return run_causev_on(cfg, t, s).reach; });
  dump_matrix(cfg, r.score, table.names());
  return result;
}

// ---- qte

Json method_qte(const RunConfig& cfg, Json& meta) {
  require_input(cfg);
  const TreatmentSample sample = load_treatment_csv(cfg.input);
  PropensitySpec spec;
  spec.degree = cfg.propensity_degree;
  spec.constant = cfg.propensity_constant;
  const QteEstimate e = qte_bootstrap(sample, spec, cfg.tau_n, cfg.p_n, cfg.n_boot, require_seed(cfg));
  meta["n_rows"] = sample.size();
  return Json{{"qte", e.qte},
              {"q1_intermediate", e.q1_int},
              {"q0_intermediate", e.q0_int},
              {"xi1", e.xi1},
              {"xi0", e.xi0},
              {"tau_n", e.tau_n},
              {"p_n", e.p_n},
              {"ci", interval_json(*e.ci)},
              {"n_boot", e.n_boot},
              {"n_failed", e.n_failed},
              {"n_treated", sample.arm_size(1)},
              {"n_control", sample.arm_size(0)}};
}

// ---- fit-gpd

Json fit_json(const TailFit& f) {
  return Json{{"xi", f.xi},
              {"se_xi", f.se_xi},
              {"sigma", f.sigma},
              {"n_exceed", f.n_exceed},
              {"method", f.method == TailFit::Method::mle ? "mle" : "pwm"}};
}

Json method_fit_gpd(const RunConfig& cfg, Json& meta) {
  const SeriesTable table = load_table(cfg);
  meta["n_rows"] = table.rows();
  Json fits = Json::array();
  for (std::size_t j = 0; j < table.cols(); ++j) {
    const std::vector<double> values = present_values(table.column(j));
    const double thr = empirical_quantile(values, cfg.threshold_q);
    Json entry{{"name", table.names()[j]}, {"threshold", thr}, {"n_present", values.size()}};
    try {
      entry["raw"] = fit_json(fit_gpd_above(values, thr));
    } catch (const Error& e) {
      throw Error("column " + table.names()[j] + ": " + e.what());
    }
    std::vector<double> excess;
    for (const ClusterMax& c : decluster_runs(table.column(j), thr, cfg.decluster_gap)) excess.push_back(c.value - thr);
    Json dc{{"n_clusters", excess.size()}, {"gap", cfg.decluster_gap}};
    try {
      dc["fit"] = fit_json(fit_gpd(excess));
    } catch (const Error& e) {
      dc["fit"] = nullptr;
      dc["error"] = e.what();
    }
    entry["declustered"] = std::move(dc);
    fits.push_back(std::move(entry));
  }
  return Json{{"tail_fits", std::move(fits)}};
}

// ---- simulate

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

Json method_simulate(const RunConfig& cfg, Json& meta) {
  require_input(cfg);
  const DagFile f = load_dag_file(cfg.input);
  if (!f.fully_weighted()) throw ArgumentError(cfg.input + ": every edge needs a weight for simulation");
  const ModelKind kind = cfg.model == "linear" ? ModelKind::linear : ModelKind::maxlinear;
  const WeightedDag wd(f.dag, f.weights, kind);
  const NoiseSpec noise = NoiseSpec::parse(cfg.noise);
  const std::uint64_t seed = require_seed(cfg);
  SeriesTable table;
  if (kind == ModelKind::linear) {
    if (!cfg.z_noise.empty()) throw ArgumentError("propagating noise applies to max-linear models only");
    table = sample_lscm(wd, noise, cfg.n, seed);
  } else if (cfg.z_noise.empty()) {
    table = sample_rmlm(wd, noise, cfg.n, seed);
  } else {
    table = sample_rmlm_noisy(wd, noise, NoiseSpec::parse(cfg.z_noise), cfg.n, seed);
  }
  const std::string csv = format_series_csv(table);
  if (!cfg.data_out.empty()) write_text_file(cfg.data_out, csv);
  meta["n_rows"] = table.rows();

  Json cols = Json::array();
  for (std::size_t j = 0; j < table.cols(); ++j) {
    cols.push_back(Json{{"name", table.names()[j]},
                        {"median", empirical_quantile(table.column(j), 0.5)},
                        {"max", *std::max_element(table.column(j).begin(), table.column(j).end())}});
  }
  const CoefMatrix coef = kind == ModelKind::linear ? linear_noise_coefficients(wd) : ml_coefficient_matrix(wd);
  return Json{{"model", cfg.model},
              {"noise", noise.describe()},
              {"columns", std::move(cols)},
              {"coefficients", detail::matrix_json(coef.values, table.names())},
              {"reachability", detail::matrix_json(reachability(wd.dag()).values, table.names())},
              {"data_fnv1a", fnv1a(csv)}};
}

// ---- evaluate

Json method_evaluate(const RunConfig& cfg, Json& meta) {
  require_input(cfg);
  if (cfg.truth.empty()) throw ArgumentError("evaluate needs --truth");
  std::vector<std::string> names;
  // names come from whichever side is a named matrix
  if (is_csv(cfg.input)) {
    names = load_matrix_csv(cfg.input).names;
  } else if (is_csv(cfg.truth)) {
    names = load_matrix_csv(cfg.truth).names;
  } else {
    names = default_names(load_dag_file(cfg.input).dag.size());
  }
  const CoefMatrix est = load_structure(cfg.input, names);
  const CoefMatrix truth = load_structure(cfg.truth, names);
  meta["n_rows"] = 0;
  return Json{{"estimate", detail::matrix_json(est.values, names)},
              {"truth", detail::matrix_json(truth.values, names)},
              {"comparison", comparison_json(est, truth, names)}};
}

}  // namespace

std::string run(const RunConfig& cfg) {
  Json meta{{"version", kVersion}, {"warnings", Json::array()}};
  Json result;
  switch (cfg.method) {
    case Method::ease: result = method_ease(cfg, meta); break;
    case Method::causev: result = method_causev(cfg, meta); break;
    case Method::rmlm: result = method_rmlm(cfg, meta); break;
    case Method::tree: result = method_tree(cfg, meta); break;
    case Method::qte: result = method_qte(cfg, meta); break;
    case Method::fit_gpd: result = method_fit_gpd(cfg, meta); break;
    case Method::simulate: result = method_simulate(cfg, meta); break;
    case Method::evaluate: result = method_evaluate(cfg, meta); break;
  }
  Json config = Json::object();
  for (const auto& [k, v] : cfg.entries()) config[k] = v;
  Json doc{{"format", kReportFormat},
           {"method", to_string(cfg.method)},
           {"config", std::move(config)},
           {"result", std::move(result)},
           {"metadata", std::move(meta)}};
  const std::string text = detail::emit_report(std::move(doc));
  if (!cfg.output.empty()) write_text_file(cfg.output, text);
  return text;
}

}  // namespace tailcausal
