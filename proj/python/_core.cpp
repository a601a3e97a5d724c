#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "treefire/cayley.hpp"
#include "treefire/cutting.hpp"
#include "treefire/distributions.hpp"
#include "treefire/experiments.hpp"
#include "treefire/fire.hpp"
#include "treefire/stats.hpp"

namespace py = pybind11;
using namespace treefire;

namespace {

LabeledTree tree_from_edges(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& edges) {
  std::vector<Edge> list;
  list.reserve(edges.size());
  for (const auto& [u, v] : edges) list.push_back({u, v});
  LabeledTree tree(n, std::move(list));
  if (!tree.is_spanning_tree()) throw std::domain_error("edges do not form a spanning tree");
  return tree;
}

std::vector<std::pair<Vertex, Vertex>> edge_pairs(const LabeledTree& tree) {
  std::vector<std::pair<Vertex, Vertex>> out;
  out.reserve(tree.num_edges());
  for (const Edge& e : tree.edges()) out.emplace_back(e.u, e.v);
  return out;
}

py::dict outcome_dict(const FireOutcome& out) {
  std::vector<std::string> states;
  for (auto s : out.edge_states) {
    states.push_back(s == EdgeState::Burnt ? "burnt" : s == EdgeState::Fireproof ? "fireproof"
                                                                                 : "inflammable");
  }
  py::dict d;
  d["edge_states"] = states;
  d["fireproof_vertex"] = std::vector<bool>(out.fireproof_vertex.begin(), out.fireproof_vertex.end());
  d["component_sizes"] = component_sizes(out);
  d["density"] = out.density();
  d["largest_fraction"] = out.largest_fraction();
  d["ignitions"] = out.ignitions;
  return d;
}

py::dict gof_dict(const GofResult& r) {
  py::dict d;
  d["test"] = std::string(to_string(r.kind));
  d["statistic"] = r.statistic;
  d["threshold"] = r.threshold;
  d["pass"] = r.pass;
  d["sample_size"] = r.sample_size;
  d["significance"] = r.significance;
  d["dof"] = r.dof;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Fire dynamics and random cutting on uniform Cayley trees (0-based vertices).";

  py::class_<LabeledTree>(m, "Tree")
      .def(py::init(&tree_from_edges), py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &LabeledTree::size)
      .def("edges", &edge_pairs)
      .def("degree", &LabeledTree::degree)
      .def("__len__", &LabeledTree::size)
      .def("__repr__", [](const LabeledTree& t) {
        return "<Tree n=" + std::to_string(t.size()) + ">";
      });

  m.def("sample_uniform_tree", [](std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return sample_uniform_tree(n, rng);
  }, py::arg("n"), py::arg("seed"));
  m.def("prufer_decode", [](const std::vector<Vertex>& code) { return prufer_decode(code); });
  m.def("prufer_encode", &prufer_encode);
  m.def("spine_and_bushes", [](const LabeledTree& tree, Vertex u, Vertex v) {
    const auto d = spinal_decompose(tree, u, v);
    return py::make_tuple(d.spine, d.bush_sizes());
  }, py::arg("tree"), py::arg("u"), py::arg("v"));
  m.def("conditioned_borel_sample", [](std::size_t k, std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    return conditioned_borel_sample(k, n, rng);
  }, py::arg("k"), py::arg("n"), py::arg("seed"));

  m.def("isolate", [](const LabeledTree& tree, const std::vector<Vertex>& targets,
                      std::uint64_t seed) {
    Rng rng(seed);
    return isolate(tree, targets, rng).cuts;
  }, py::arg("tree"), py::arg("targets"), py::arg("seed"));
  m.def("isolate_in_order", [](const LabeledTree& tree, const std::vector<Vertex>& targets,
                               const std::vector<EdgeId>& order) {
    return isolate_in_order(tree, targets, order).cuts;
  }, py::arg("tree"), py::arg("targets"), py::arg("order"));
  m.def("exhaustive_isolation_mean", [](unsigned n, unsigned k) {
    const auto mean = exhaustive_isolation_mean(n, k);
    return py::make_tuple(mean.numerator, mean.denominator);
  }, py::arg("n"), py::arg("k"));

  m.def("fire_probability", [](std::size_t n, std::optional<double> alpha, std::optional<double> a) {
    if (alpha.has_value() == a.has_value()) throw std::invalid_argument("give exactly one of alpha, a");
    return alpha ? FireConfig::from_alpha(n, *alpha).q : FireConfig::from_scale(n, *a).q;
  }, py::arg("n"), py::arg("alpha") = py::none(), py::arg("a") = py::none());
  m.def("run_fire", [](const LabeledTree& tree, double q, std::uint64_t seed) {
    Rng rng(seed);
    return outcome_dict(run_fire(tree, FireConfig::from_probability(tree.size(), q), rng));
  }, py::arg("tree"), py::arg("q"), py::arg("seed"));
  m.def("run_fire_coupled", [](const LabeledTree& tree, double q_low, double q_high,
                               std::uint64_t seed) {
    Rng rng(seed);
    const auto [low, high] = run_fire_coupled(tree, q_low, q_high, rng);
    return py::make_tuple(outcome_dict(low), outcome_dict(high));
  }, py::arg("tree"), py::arg("q_low"), py::arg("q_high"), py::arg("seed"));

  m.def("borel_pmf", &borel_pmf);
  m.def("borel_tanner_pmf", &borel_tanner_pmf);
  m.def("rayleigh_cdf", &rayleigh_cdf);
  m.def("chi_cdf", &chi_cdf);
  m.def("spine_pmf", &spine_pmf);
  m.def("first_cut_pmf", &first_cut_pmf);
  m.def("dinf_pdf", [](double x, double a) { return dinf_pdf(DinfLaw{a}, x); },
        py::arg("x"), py::arg("a") = 1.0);
  m.def("dinf_cdf", [](double x, double a) { return dinf_cdf(DinfLaw{a}, x); },
        py::arg("x"), py::arg("a") = 1.0);
  m.def("dinf_moment", &dinf_moment, py::arg("k"), py::arg("a") = 1.0);

  m.def("ks_statistic", [](const std::vector<double>& samples,
                           const std::function<double(double)>& cdf, double significance) {
    return gof_dict(ks_statistic(samples, cdf, significance));
  }, py::arg("samples"), py::arg("cdf"), py::arg("significance") = kDefaultSignificance);
  m.def("chi_square_gof", [](const std::vector<std::uint64_t>& counts,
                             const std::vector<double>& pmf, double significance) {
    return gof_dict(chi_square_gof(counts, pmf, significance));
  }, py::arg("counts"), py::arg("pmf"), py::arg("significance") = kDefaultSignificance);

  m.def("run_experiment", [](const std::string& config_json) {
    const ExperimentConfig config = config_from_json(config_json);
    std::ostringstream csv;
    ExperimentReport report;
    {
      py::gil_scoped_release release;
      report = run_experiment(config, csv);
    }
    py::list gof;
    for (const auto& row : report.gof) {
      py::dict d = gof_dict(row.result);
      d["n"] = row.n;
      d["metric"] = row.metric;
      gof.append(d);
    }
    py::list summaries;
    for (const auto& row : report.summaries) {
      py::dict d;
      d["n"] = row.n;
      d["metric"] = row.metric;
      d["count"] = row.summary.count;
      d["mean"] = row.summary.mean;
      d["std_error"] = row.summary.std_error;
      d["min"] = row.summary.min;
      d["max"] = row.summary.max;
      summaries.append(d);
    }
    py::dict out;
    out["csv"] = csv.str();
    out["summaries"] = summaries;
    out["gof"] = gof;
    out["meta"] = report.meta;
    out["all_pass"] = report.all_pass();
    return out;
  }, py::arg("config_json"),
     "Runs an experiment described by a JSON config and returns the CSV text and summaries.");
}
