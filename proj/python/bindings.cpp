// Python bindings for the core operations: topologies, activations, the
// forward/adjoint passes, the adaptive-momentum trainer, convergence
// checking, compression models and the image metrics.
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <utility>
#include <vector>

#include "dagnet/autoencoder.hpp"
#include "dagnet/convergence.hpp"
#include "dagnet/data.hpp"
#include "dagnet/gradients.hpp"
#include "dagnet/io.hpp"
#include "dagnet/metrics.hpp"
#include "dagnet/network.hpp"
#include "dagnet/optimizer.hpp"
#include "dagnet/train.hpp"

namespace py = pybind11;
using namespace dagnet;

namespace {

using Rows = std::vector<std::vector<double>>;

Matrix to_matrix(const Rows& rows) {
  if (rows.empty() || rows[0].empty()) {
    throw DimensionMismatch("matrix rows must be non-empty");
  }
  Matrix m(rows.size(), rows[0].size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols()) {
      throw DimensionMismatch("matrix rows have inconsistent lengths");
    }
    for (std::size_t c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return m;
}

Rows from_matrix(const Matrix& m) {
  Rows rows(m.rows(), std::vector<double>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) rows[r][c] = m(r, c);
  }
  return rows;
}

std::vector<Edge> to_edges(const std::vector<std::pair<int, int>>& pairs) {
  std::vector<Edge> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) edges.push_back({a, b});
  return edges;
}

std::vector<std::pair<int, int>> from_edges(const std::vector<Edge>& edges) {
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (const Edge& e : edges) pairs.emplace_back(e.src, e.dst);
  return pairs;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Feed-forward networks on layered DAGs with skip connections, trained "
      "by backpropagation with norm-adaptive momentum";

  py::register_exception<Error>(m, "DagnetError");

  py::class_<DagTopology>(m, "DagTopology")
      .def(py::init([](std::vector<int> widths,
                       std::vector<std::pair<int, int>> edges,
                       std::optional<int> code_layer) {
             return DagTopology(std::move(widths), to_edges(edges), code_layer);
           }),
           py::arg("layer_widths"), py::arg("edges"),
           py::arg("code_layer") = std::nullopt)
      .def_property_readonly("layer_widths", &DagTopology::layer_widths)
      .def_property_readonly(
          "edges", [](const DagTopology& t) { return from_edges(t.edges()); })
      .def_property_readonly("code_layer", &DagTopology::code_layer)
      .def("num_layers", &DagTopology::num_layers)
      .def("last_layer", &DagTopology::last_layer)
      .def("width", &DagTopology::width, py::arg("layer"))
      .def("fan_in_total", &DagTopology::fan_in_total, py::arg("layer"))
      .def("weight_count", &DagTopology::weight_count)
      .def("sequential_counterpart", &DagTopology::sequential_counterpart);

  m.def("crossencoder_topology", &crossencoder_topology, py::arg("widths"),
        py::arg("code_layer"),
        "All intra-block layer pairs around the code layer");

  py::class_<Activation>(m, "Activation")
      .def_static("from_name", &Activation::from_name, py::arg("name"))
      .def_property_readonly("name", &Activation::name)
      .def_property_readonly("bounded", &Activation::bounded)
      .def_property_readonly("value_bound", &Activation::value_bound)
      .def_property_readonly("derivative_bound", &Activation::derivative_bound)
      .def_property_readonly("second_derivative_bound",
                             &Activation::second_derivative_bound)
      .def("__call__",
           [](const Activation& a, double s) { return a(s); })
      .def("derivative", &Activation::derivative)
      .def("second_derivative", &Activation::second_derivative);

  py::class_<EdgeMatrices>(m, "EdgeMatrices")
      .def_property_readonly(
          "edges",
          [](const EdgeMatrices& c) { return from_edges(c.edges()); })
      .def("matrix",
           [](const EdgeMatrices& c, int src, int dst) {
             return from_matrix(c.at({src, dst}));
           },
           py::arg("src"), py::arg("dst"))
      .def("max_abs_entry", &EdgeMatrices::max_abs_entry)
      .def("total_norm_sq", &EdgeMatrices::total_norm_sq);

  py::class_<WeightSet, EdgeMatrices>(m, "WeightSet")
      .def(py::init<const DagTopology&>(), py::arg("topology"))
      .def("set_matrix",
           [](WeightSet& w, int src, int dst, const Rows& rows) {
             Matrix& target = w.at({src, dst});
             Matrix value = to_matrix(rows);
             if (!target.same_shape(value)) {
               throw DimensionMismatch("matrix shape does not fit the edge");
             }
             target = std::move(value);
           },
           py::arg("src"), py::arg("dst"), py::arg("rows"));

  py::class_<GradientSet, EdgeMatrices>(m, "GradientSet");

  py::class_<ForwardTrace>(m, "ForwardTrace")
      .def_property_readonly(
          "outputs", [](const ForwardTrace& t) { return t.out; })
      .def_property_readonly(
          "pre_activations", [](const ForwardTrace& t) { return t.pre; })
      .def_property_readonly("output",
                             [](const ForwardTrace& t) { return t.output(); });

  m.def("init_random", &init_random, py::arg("topology"), py::arg("seed"),
        py::arg("gain") = 1.0);
  m.def("forward", &forward, py::arg("topology"), py::arg("weights"),
        py::arg("activation"), py::arg("x"));
  m.def("batch_error", &batch_error, py::arg("topology"), py::arg("weights"),
        py::arg("activation"), py::arg("inputs"), py::arg("targets"));
  m.def("backward", &backward, py::arg("topology"), py::arg("weights"),
        py::arg("activation"), py::arg("trace"), py::arg("target"));
  m.def("batch_gradients", &batch_gradients, py::arg("topology"),
        py::arg("weights"), py::arg("activation"), py::arg("inputs"),
        py::arg("targets"));
  m.def("finite_difference_gradients", &finite_difference_gradients,
        py::arg("topology"), py::arg("weights"), py::arg("activation"),
        py::arg("inputs"), py::arg("targets"), py::arg("h") = 1e-6,
        py::arg("max_weights") = 10000);
  m.def("gradient_norm_sq", &gradient_norm_sq, py::arg("gradients"));
  m.def("max_relative_error", &max_relative_error, py::arg("a"), py::arg("b"),
        py::arg("floor") = 1e-10);

  m.def("momentum_coefficient", &momentum_coefficient, py::arg("tau"),
        py::arg("q_norm"), py::arg("prev_delta_norm"));
  m.def("max_eta", &max_eta, py::arg("s"), py::arg("C"),
        "Largest learning rate covered by the descent guarantee");

  py::class_<IterationRecord>(m, "IterationRecord")
      .def_readonly("k", &IterationRecord::k)
      .def_readonly("error", &IterationRecord::error)
      .def_readonly("q_sq_total", &IterationRecord::q_sq_total)
      .def_readonly("dv_sq_total", &IterationRecord::dv_sq_total)
      .def_readonly("dh_sq_total", &IterationRecord::dh_sq_total)
      .def_readonly("predictor", &IterationRecord::predictor)
      .def_readonly("error_change", &IterationRecord::error_change)
      .def_readonly("max_abs_weight", &IterationRecord::max_abs_weight);

  py::class_<ConvergenceVerdict>(m, "ConvergenceVerdict")
      .def_readonly("records_used", &ConvergenceVerdict::records_used)
      .def_readonly("monotone_descent", &ConvergenceVerdict::monotone_descent)
      .def_readonly("descent_inequality_ok",
                    &ConvergenceVerdict::descent_inequality_ok)
      .def_readonly("update_bound_ok", &ConvergenceVerdict::update_bound_ok)
      .def_readonly("tail_max_grad_norm",
                    &ConvergenceVerdict::tail_max_grad_norm)
      .def_readonly("tail_ok", &ConvergenceVerdict::tail_ok)
      .def_readonly("estimated_C", &ConvergenceVerdict::estimated_C)
      .def_readonly("curvature_estimated",
                    &ConvergenceVerdict::curvature_estimated)
      .def_readonly("max_eta_for_C", &ConvergenceVerdict::max_eta_for_C)
      .def_readonly("eta_within_bound", &ConvergenceVerdict::eta_within_bound)
      .def_readonly("final_error", &ConvergenceVerdict::final_error)
      .def("converged", &ConvergenceVerdict::converged);

  py::class_<VerdictThresholds>(m, "VerdictThresholds")
      .def(py::init<>())
      .def_readwrite("tail_threshold", &VerdictThresholds::tail_threshold)
      .def_readwrite("tail_window", &VerdictThresholds::tail_window);

  m.def("estimate_C", &estimate_C, py::arg("records"));
  m.def("verify_theorem", &verify_theorem, py::arg("records"), py::arg("eta"),
        py::arg("s"), py::arg("thresholds") = VerdictThresholds{});

  py::class_<TrainOptions> opts(m, "TrainOptions");
  opts.def(py::init<>())
      .def_readwrite("eta", &TrainOptions::eta)
      .def_readwrite("s", &TrainOptions::s)
      .def_readwrite("iterations", &TrainOptions::iterations)
      .def_readwrite("seed", &TrainOptions::seed)
      .def_readwrite("init_gain", &TrainOptions::init_gain)
      .def_readwrite("method", &TrainOptions::method)
      .def_readwrite("beta", &TrainOptions::beta)
      .def_readwrite("early_stop", &TrainOptions::early_stop)
      .def_readwrite("thresholds", &TrainOptions::thresholds)
      .def_readwrite("initial_weights", &TrainOptions::initial_weights);
  py::enum_<TrainOptions::Method>(opts, "Method")
      .value("Adaptive", TrainOptions::Method::Adaptive)
      .value("FixedMomentum", TrainOptions::Method::FixedMomentum);

  py::class_<TrainResult>(m, "TrainResult")
      .def_readonly("weights", &TrainResult::weights)
      .def_readonly("trajectory", &TrainResult::trajectory)
      .def_readonly("iterations_run", &TrainResult::iterations_run)
      .def_readonly("stopped_early", &TrainResult::stopped_early)
      .def_readonly("final_error", &TrainResult::final_error);

  m.def("train", &train, py::arg("topology"), py::arg("activation"),
        py::arg("inputs"), py::arg("targets"), py::arg("options"));
  m.def("teacher_targets", &teacher_targets, py::arg("topology"),
        py::arg("activation"), py::arg("base"), py::arg("inputs"),
        py::arg("jitter"), py::arg("seed"));

  py::class_<CompressionModel>(m, "CompressionModel")
      .def(py::init<DagTopology, WeightSet, Activation>(), py::arg("topology"),
           py::arg("weights"), py::arg("activation"))
      .def_readonly("topology", &CompressionModel::topology)
      .def_readonly("weights", &CompressionModel::weights)
      .def_readonly("activation", &CompressionModel::activation)
      .def_property_readonly("code_layer", &CompressionModel::code_layer)
      .def_property_readonly("code_width", &CompressionModel::code_width);
  m.def("encode", &encode, py::arg("model"), py::arg("x"));
  m.def("decode", &decode, py::arg("model"), py::arg("code"));
  m.def("reconstruction_error", &reconstruction_error, py::arg("model"),
        py::arg("samples"));

  py::class_<Dataset>(m, "Dataset")
      .def_readonly("samples", &Dataset::samples)
      .def_readonly("rows", &Dataset::rows)
      .def_readonly("cols", &Dataset::cols)
      .def_readonly("tag", &Dataset::tag)
      .def("__len__", [](const Dataset& d) { return d.size(); });
  m.def("synthetic_faces", &synthetic_faces, py::arg("count"), py::arg("rows"),
        py::arg("cols"), py::arg("seed"));
  m.def("split", &split, py::arg("dataset"), py::arg("train_count"),
        py::arg("seed"));

  m.def("psnr",
        [](const Rows& ref, const Rows& rec, double range) {
          return psnr(ImagePair(to_matrix(ref), to_matrix(rec), range));
        },
        py::arg("reference"), py::arg("reconstruction"),
        py::arg("data_range") = 1.0);
  m.def("nrmse",
        [](const Rows& ref, const Rows& rec, double range) {
          return nrmse(ImagePair(to_matrix(ref), to_matrix(rec), range));
        },
        py::arg("reference"), py::arg("reconstruction"),
        py::arg("data_range") = 1.0);
  m.def("ssim",
        [](const Rows& ref, const Rows& rec, double range) {
          return ssim(ImagePair(to_matrix(ref), to_matrix(rec), range));
        },
        py::arg("reference"), py::arg("reconstruction"),
        py::arg("data_range") = 1.0);

  m.def("topology_to_text", &topology_to_text, py::arg("topology"));
  m.def("topology_from_text", &topology_from_text, py::arg("text"),
        py::arg("origin") = "<string>");
  m.def("topology_hash",
        [](const DagTopology& t) { return hash_hex(topology_hash(t)); },
        py::arg("topology"));
}
