#include "tailcausal/causev.hpp"
#include "tailcausal/config.hpp"
#include "tailcausal/ease.hpp"
#include "tailcausal/error.hpp"
#include "tailcausal/eval.hpp"
#include "tailcausal/pipeline.hpp"
#include "tailcausal/qte.hpp"
#include "tailcausal/rmlm_discovery.hpp"
#include "tailcausal/scm.hpp"
#include "tailcausal/tail_stats.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <tuple>

namespace py = pybind11;
using namespace tailcausal;

namespace {

using EdgeList = std::vector<std::pair<Vertex, Vertex>>;
using WeightedEdges = std::vector<std::tuple<Vertex, Vertex, double>>;

std::vector<Edge> to_edges(const EdgeList& list) {
  std::vector<Edge> out;
  for (const auto& [a, b] : list) out.push_back({a, b});
  return out;
}

EdgeList from_edges(const std::vector<Edge>& edges) {
  EdgeList out;
  for (const Edge& e : edges) out.emplace_back(e.from, e.to);
  return out;
}

ModelKind parse_kind(const std::string& s) {
  if (s == "linear") return ModelKind::linear;
  if (s == "maxlinear") return ModelKind::maxlinear;
  throw ArgumentError("model kind must be 'linear' or 'maxlinear', got '" + s + "'");
}

WeightedDag make_weighted(std::size_t d, const WeightedEdges& edges, const std::string& kind) {
  std::vector<Edge> es;
  std::map<Edge, double> w;
  for (const auto& [a, b, c] : edges) {
    es.push_back({a, b});
    w[{a, b}] = c;
  }
  return WeightedDag(Dag(d, es), w, parse_kind(kind));
}

SeriesTable table_of(const Matrix& data) { return SeriesTable::from_matrix(data); }

CoefMatrix reach_of(const Matrix& m) { return {CoefKind::reachability, m}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Causal discovery and extremal treatment effects for heavy-tailed data";
  m.attr("__version__") = "0.1.0";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
  py::register_exception<SampleSizeError>(m, "SampleSizeError", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<FitError>(m, "FitError", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<CycleError>(m, "CycleError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  // graphs and models
  py::class_<Dag>(m, "Dag")
      .def(py::init([](std::size_t d, const EdgeList& edges) { return Dag(d, to_edges(edges)); }), py::arg("d"),
           py::arg("edges") = EdgeList{})
      .def_property_readonly("size", &Dag::size)
      .def_property_readonly("edges", [](const Dag& g) { return from_edges(g.edges()); })
      .def("has_edge", &Dag::has_edge)
      .def("__eq__", [](const Dag& a, const Dag& b) { return a == b; })
      .def("__repr__", [](const Dag& g) {
        return "Dag(" + std::to_string(g.size()) + ", " + std::to_string(g.edges().size()) + " edges)";
      });

  m.def("topological_order", &topological_order);
  m.def("reachability", [](const Dag& g) { return reachability(g).values; });

  py::class_<WeightedDag>(m, "WeightedDag")
      .def(py::init(&make_weighted), py::arg("d"), py::arg("edges"), py::arg("kind") = "maxlinear",
           "edges: (from, to, weight) triples, 0-based")
      .def_property_readonly("dag", &WeightedDag::dag)
      .def_property_readonly("size", &WeightedDag::size)
      .def_property_readonly("kind",
                             [](const WeightedDag& w) { return w.kind() == ModelKind::linear ? "linear" : "maxlinear"; })
      .def("weight", &WeightedDag::weight);

  m.def("ml_coefficient_matrix", [](const WeightedDag& w) { return ml_coefficient_matrix(w).values; });
  m.def("linear_noise_coefficients", [](const WeightedDag& w) { return linear_noise_coefficients(w).values; });
  m.def(
      "standardize_ml", [](const Matrix& b, double alpha) { return standardize_ml({CoefKind::ml, b}, alpha).values; },
      py::arg("b"), py::arg("alpha"));
  m.def(
      "chi_matrix", [](const Matrix& b, double alpha) { return chi_matrix({CoefKind::ml, b}, alpha); }, py::arg("b"),
      py::arg("alpha"));
  m.def("minimum_ml_dag", &minimum_ml_dag);
  m.def(
      "is_valid_representation",
      [](const WeightedDag& cand, const WeightedDag& ref) {
        const RepresentationCheck c = is_valid_representation(cand, ref);
        return py::make_tuple(c.valid, c.failed_condition == 0 ? std::string() : std::string(1, c.failed_condition),
                              c.detail);
      },
      py::arg("candidate"), py::arg("reference"));
  m.def(
      "sample",
      [](const WeightedDag& w, const std::string& noise, std::size_t n, std::uint64_t seed) {
        const NoiseSpec spec = NoiseSpec::parse(noise);
        const SeriesTable t = w.kind() == ModelKind::linear ? sample_lscm(w, spec, n, seed) : sample_rmlm(w, spec, n, seed);
        return t.complete_rows();
      },
      py::arg("model"), py::arg("noise"), py::arg("n"), py::arg("seed"),
      "n x d draws; noise as 'pareto:2.5', 'frechet:2', 'student_t:3', 'lomax:2:0.1'");

  // univariate tails
  py::class_<TailFit>(m, "TailFit")
      .def_readonly("xi", &TailFit::xi)
      .def_readonly("sigma", &TailFit::sigma)
      .def_readonly("threshold", &TailFit::threshold)
      .def_readonly("n_exceed", &TailFit::n_exceed)
      .def_readonly("se_xi", &TailFit::se_xi)
      .def("cdf", &TailFit::cdf)
      .def("quantile", &TailFit::quantile);

  m.def("fit_gpd", [](const std::vector<double>& excesses) { return fit_gpd(excesses); }, py::arg("excesses"));
  m.def(
      "fit_gpd_above", [](const std::vector<double>& x, double threshold) { return fit_gpd_above(x, threshold); },
      py::arg("sample"), py::arg("threshold"));
  m.def(
      "hill_estimate", [](const std::vector<double>& x, std::size_t k) { return hill_estimate(x, k); },
      py::arg("sample"), py::arg("k"));
  m.def(
      "empirical_quantile", [](const std::vector<double>& x, double tau) { return empirical_quantile(x, tau); },
      py::arg("sample"), py::arg("tau"));

  // discovery
  m.def(
      "gamma_matrix", [](const Matrix& data, double k_frac) { return gamma_matrix(table_of(data), k_frac).gamma.values; },
      py::arg("data"), py::arg("k_frac") = 0.0, "NaN diagonal; k_frac <= 0 picks the default per pair");
  m.def(
      "gamma_population", [](const WeightedDag& w, double alpha) { return gamma_population(w, alpha).gamma.values; },
      py::arg("model"), py::arg("alpha") = 1.0);
  m.def(
      "ease_order", [](const Matrix& gamma) { return ease_order({{CoefKind::gamma, gamma}, {}}); }, py::arg("gamma"));
  m.def(
      "ease_reachability",
      [](const Matrix& gamma, const std::vector<Vertex>& order, double threshold) {
        return ease_reachability({{CoefKind::gamma, gamma}, {}}, order, threshold).values;
      },
      py::arg("gamma"), py::arg("order"), py::arg("edge_threshold") = 0.1);

  py::class_<CausevScore>(m, "CausevScore")
      .def_readonly("s_xy", &CausevScore::s_xy)
      .def_readonly("s_yx", &CausevScore::s_yx)
      .def_readonly("theta", &CausevScore::theta)
      .def_readonly("saturated", &CausevScore::saturated)
      .def_readonly("n_quadrant", &CausevScore::n_quadrant);
  m.def(
      "causev_score",
      [](const std::vector<double>& x, const std::vector<double>& y, double u) { return causev_score(x, y, u); },
      py::arg("x"), py::arg("y"), py::arg("u") = 0.9);

  m.def(
      "spectral_scalings",
      [](const Matrix& data, double k_frac) { return spectral_scalings(table_of(data), k_frac).sigma.values; },
      py::arg("data"), py::arg("k_frac") = kDefaultSpectralKFrac);
  m.def(
      "reconstruct_ml",
      [](const Matrix& sigma, std::optional<std::vector<Vertex>> order) {
        return reconstruct_ml_from_scalings({{CoefKind::scalings, sigma}, 0}, order).bbar.values;
      },
      py::arg("sigma"), py::arg("order") = py::none());
  m.def(
      "rmlm_reachability",
      [](const Matrix& bbar, double threshold) {
        return rmlm_reachability({CoefKind::ml_standardized, bbar}, threshold).values;
      },
      py::arg("bbar"), py::arg("edge_threshold") = 0.05);
  m.def(
      "tree_scores",
      [](const Matrix& data, double alpha_level, double r) { return tree_scores(table_of(data), alpha_level, r).w.values; },
      py::arg("data"), py::arg("alpha_level") = 0.9, py::arg("r") = 0.75);
  m.def(
      "min_arborescence",
      [](const Matrix& w, Vertex root) { return min_arborescence({{CoefKind::score, w}, {}, 0.75, 0.9}, root); },
      py::arg("w"), py::arg("root"), "tree with every edge oriented toward root; edge a -> b costs w[b, a]");

  // treatment effects
  py::class_<QteEstimate>(m, "QteEstimate")
      .def_readonly("qte", &QteEstimate::qte)
      .def_readonly("q1_int", &QteEstimate::q1_int)
      .def_readonly("q0_int", &QteEstimate::q0_int)
      .def_readonly("xi1", &QteEstimate::xi1)
      .def_readonly("xi0", &QteEstimate::xi0)
      .def_readonly("tau_n", &QteEstimate::tau_n)
      .def_readonly("p_n", &QteEstimate::p_n)
      .def_property_readonly("ci",
                             [](const QteEstimate& e) -> py::object {
                               if (!e.ci) return py::none();
                               return py::make_tuple(e.ci->lower, e.ci->upper);
                             })
      .def_readonly("n_failed", &QteEstimate::n_failed);
  m.def(
      "extremal_qte",
      [](std::vector<double> y, std::vector<int> d, std::optional<Matrix> x, double tau_n, double p_n,
         std::size_t degree, std::size_t n_boot, std::uint64_t seed) {
        const TreatmentSample s(std::move(y), std::move(d), x ? *x : Matrix());
        if (n_boot > 0) return qte_bootstrap(s, PropensitySpec{degree, std::nullopt}, tau_n, p_n, n_boot, seed);
        return extremal_qte(s, estimate_propensity(s, degree), tau_n, p_n);
      },
      py::arg("y"), py::arg("d"), py::arg("x") = py::none(), py::arg("tau_n") = 0.05, py::arg("p_n") = 0.005,
      py::arg("degree") = 2, py::arg("n_boot") = 0, py::arg("seed") = 0);

  // evaluation and pipeline
  m.def(
      "reachability_distance",
      [](const Matrix& estimate, const Matrix& truth) {
        const StructureComparison c = reachability_distance(reach_of(estimate), reach_of(truth));
        return py::make_tuple(c.distance, from_edges(c.mismatches));
      },
      py::arg("estimate"), py::arg("truth"));
  m.def(
      "run",
      [](const std::string& method, const std::string& config_text) {
        RunConfig cfg;
        apply_config_text(cfg, config_text);
        cfg.method = parse_method(method);
        py::gil_scoped_release release;
        return tailcausal::run(cfg);
      },
      py::arg("method"), py::arg("config") = "", "runs a CLI method from `key = value` settings; returns the JSON report");
}
