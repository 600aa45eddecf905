#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "binaryne/codes.hpp"
#include "binaryne/eval.hpp"
#include "binaryne/graph.hpp"
#include "binaryne/model.hpp"
#include "binaryne/search.hpp"
#include "binaryne/walks.hpp"

namespace py = pybind11;
using namespace binaryne;

namespace {

py::array_t<float> w_in_array(const ModelParams& p) {
  py::array_t<float> out({p.node_count(), p.dim()});
  std::copy(p.w_in().begin(), p.w_in().end(), out.mutable_data());
  return out;
}

py::array_t<std::uint8_t> code_bits(const CodeMatrix& codes) {
  py::array_t<std::uint8_t> out({codes.node_count(), codes.dim()});
  auto view = out.mutable_unchecked<2>();
  for (NodeId v = 0; v < codes.node_count(); ++v) {
    for (std::uint32_t r = 0; r < codes.dim(); ++r) view(v, r) = codes.bit(v, r) ? 1 : 0;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Binary network embedding with bit-packed Hamming-distance search";

  py::register_exception<ParseError>(m, "ParseError");

  py::class_<Graph>(m, "Graph")
      .def_property_readonly("node_count", &Graph::node_count)
      .def_property_readonly("edge_count", &Graph::edge_count)
      .def("degree", &Graph::degree, py::arg("node"))
      .def("neighbors",
           [](const Graph& g, NodeId v) {
             auto span = g.neighbors(v);
             return std::vector<NodeId>(span.begin(), span.end());
           },
           py::arg("node"))
      .def("external_id", &Graph::external_id, py::arg("node"))
      .def("find", [](const Graph& g, const std::string& id) { return g.find(id); },
           py::arg("external_id"));

  py::class_<AttributeMatrix>(m, "AttributeMatrix")
      .def(py::init<>())
      .def_property_readonly("attr_count", &AttributeMatrix::attr_count)
      .def_property_readonly("nnz", &AttributeMatrix::nnz)
      .def_property_readonly("total_mass", &AttributeMatrix::total_mass);

  py::class_<LabelMap>(m, "LabelMap")
      .def_property_readonly("class_count", &LabelMap::class_count)
      .def_property_readonly("labeled_count", &LabelMap::labeled_count)
      .def("label", [](const LabelMap& l, NodeId v) { return l.label(v); }, py::arg("node"));

  py::class_<PairCounts>(m, "PairCounts")
      .def_property_readonly("total", &PairCounts::total)
      .def_property_readonly("distinct", &PairCounts::distinct_ordered)
      .def("count", &PairCounts::count, py::arg("center"), py::arg("context"));

  py::class_<WalkConfig>(m, "WalkConfig")
      .def(py::init([](std::uint32_t walk_length, std::uint32_t walks_per_node,
                       std::uint32_t window, std::uint64_t seed, std::uint32_t threads) {
             WalkConfig cfg{walk_length, walks_per_node, window, seed, threads};
             cfg.validate();
             return cfg;
           }),
           py::arg("walk_length") = 100, py::arg("walks_per_node") = 40, py::arg("window") = 10,
           py::arg("seed") = 1, py::arg("threads") = 1)
      .def_readwrite("walk_length", &WalkConfig::walk_length)
      .def_readwrite("walks_per_node", &WalkConfig::walks_per_node)
      .def_readwrite("window", &WalkConfig::window)
      .def_readwrite("seed", &WalkConfig::seed)
      .def_readwrite("threads", &WalkConfig::threads);

  py::class_<TrainConfig>(m, "TrainConfig")
      .def(py::init([](std::uint32_t dim, std::uint64_t max_iters, std::uint32_t negatives,
                       double eta_start, double eta_end, double beta_start, double beta_end,
                       double switch_prob, double noise_power, std::uint64_t seed,
                       std::uint32_t threads) {
             TrainConfig cfg;
             cfg.dim = dim;
             cfg.max_iters = max_iters;
             cfg.negatives = negatives;
             cfg.eta_start = eta_start;
             cfg.eta_end = eta_end;
             cfg.beta_start = beta_start;
             cfg.beta_end = beta_end;
             cfg.switch_prob = switch_prob;
             cfg.noise_power = noise_power;
             cfg.seed = seed;
             cfg.threads = threads;
             cfg.validate();
             return cfg;
           }),
           py::arg("dim") = 128, py::arg("max_iters") = 100000000ull, py::arg("negatives") = 5,
           py::arg("eta_start") = 0.025, py::arg("eta_end") = 2.5e-6,
           py::arg("beta_start") = 0.01, py::arg("beta_end") = 1.0,
           py::arg("switch_prob") = 0.5, py::arg("noise_power") = 0.75, py::arg("seed") = 1,
           py::arg("threads") = 1)
      .def_readwrite("dim", &TrainConfig::dim)
      .def_readwrite("max_iters", &TrainConfig::max_iters)
      .def_readwrite("negatives", &TrainConfig::negatives)
      .def_readwrite("seed", &TrainConfig::seed)
      .def_readwrite("threads", &TrainConfig::threads);

  py::class_<ModelParams>(m, "ModelParams")
      .def_property_readonly("node_count", &ModelParams::node_count)
      .def_property_readonly("attr_count", &ModelParams::attr_count)
      .def_property_readonly("dim", &ModelParams::dim)
      .def("w_in", &w_in_array)
      .def("__eq__", [](const ModelParams& a, const ModelParams& b) { return a == b; });

  py::class_<CodeMatrix>(m, "CodeMatrix")
      .def_property_readonly("node_count", &CodeMatrix::node_count)
      .def_property_readonly("dim", &CodeMatrix::dim)
      .def_property_readonly("payload_bytes", &CodeMatrix::payload_bytes)
      .def("bit", &CodeMatrix::bit, py::arg("node"), py::arg("position"))
      .def("bits", &code_bits)
      .def("__eq__", [](const CodeMatrix& a, const CodeMatrix& b) { return a == b; });

  m.def("load_edge_list",
        [](const std::string& path) { return load_edge_list(path); }, py::arg("path"));
  m.def("load_attributes",
        [](const std::string& path, const Graph& g, bool strict) {
          return load_attributes(path, g, strict);
        },
        py::arg("path"), py::arg("graph"), py::arg("strict") = true);
  m.def("load_labels",
        [](const std::string& path, const Graph& g) { return load_labels(path, g); },
        py::arg("path"), py::arg("graph"));

  m.def("collect_pair_counts",
        [](const Graph& g, const WalkConfig& cfg) {
          WalkSet walks = generate_walks(g, cfg);
          return count_context_pairs(walks, cfg.window, cfg.threads);
        },
        py::arg("graph"), py::arg("config"),
        "Generate random walks and harvest windowed context-pair counts");

  m.def("train",
        [](const Graph& g, const PairCounts& counts, const AttributeMatrix& attrs,
           const TrainConfig& cfg) {
          py::gil_scoped_release release;
          return train(g, counts, attrs, cfg);
        },
        py::arg("graph"), py::arg("counts"), py::arg("attrs"), py::arg("config"));

  m.def("binarize", &binarize, py::arg("params"));
  m.def("feature_codes", &feature_codes, py::arg("attrs"), py::arg("node_count"));

  m.def("save_codes",
        [](const CodeMatrix& c, const std::string& path) { save_codes(c, path); },
        py::arg("codes"), py::arg("path"));
  m.def("load_codes", [](const std::string& path) { return load_codes(path); }, py::arg("path"));
  m.def("save_checkpoint",
        [](const ModelParams& p, const std::string& path) { save_checkpoint(p, path); },
        py::arg("params"), py::arg("path"));
  m.def("load_checkpoint",
        [](const std::string& path) { return load_checkpoint(path); }, py::arg("path"));

  m.def("hamming",
        [](const CodeMatrix& codes, NodeId a, NodeId b) {
          return hamming_distance(codes.code(a), codes.code(b));
        },
        py::arg("codes"), py::arg("a"), py::arg("b"));

  m.def("top_k",
        [](const CodeMatrix& codes, NodeId node, std::uint32_t k, bool exclude_self) {
          RankedResult r = top_k(codes, node, k, exclude_self);
          std::vector<std::pair<NodeId, std::uint32_t>> out;
          out.reserve(r.entries.size());
          for (const auto& e : r.entries) {
            out.emplace_back(e.node, static_cast<std::uint32_t>(e.distance));
          }
          return out;
        },
        py::arg("codes"), py::arg("node"), py::arg("k"), py::arg("exclude_self") = true);

  m.def("run_benchmark",
        [](const CodeMatrix& codes, const LabelMap& labels, std::vector<std::uint32_t> ks,
           bool exclude_query, std::uint32_t threads) {
          EvalConfig cfg;
          if (!ks.empty()) cfg.ks = std::move(ks);
          cfg.exclude_query = exclude_query;
          cfg.threads = threads;
          EvalReport rep = run_benchmark(codes, labels, cfg);
          py::dict out;
          py::dict precision, map;
          for (const auto& pk : rep.per_k) {
            precision[py::int_(pk.k)] = pk.precision;
            map[py::int_(pk.k)] = pk.map;
          }
          out["precision"] = precision;
          out["map"] = map;
          out["mean_query_seconds"] = rep.mean_query_seconds;
          out["memory_bytes"] = rep.memory_bytes;
          out["queries"] = rep.queries;
          out["degenerate_queries"] = rep.degenerate_queries;
          return out;
        },
        py::arg("codes"), py::arg("labels"), py::arg("ks") = std::vector<std::uint32_t>{},
        py::arg("exclude_query") = true, py::arg("threads") = 1);
}
