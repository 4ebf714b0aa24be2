#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "sigverify/alignment.hpp"
#include "sigverify/error.hpp"
#include "sigverify/evaluation.hpp"
#include "sigverify/features.hpp"
#include "sigverify/pipeline.hpp"
#include "sigverify/preprocess.hpp"
#include "sigverify/synth.hpp"
#include "sigverify/verifiers.hpp"

namespace py = pybind11;
using namespace sigverify;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

// 1-D input is read as a single channel.
Matrix to_matrix(const Array& a) {
  if (a.ndim() == 1) return Matrix::from_columns({std::vector<double>(a.data(), a.data() + a.shape(0))});
  if (a.ndim() != 2) throw InvalidArgument("expected a 1-D or 2-D array");
  Matrix m(a.shape(0), a.shape(1));
  std::copy(a.data(), a.data() + a.size(), m.data().begin());
  return m;
}

Array to_array(const Matrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

InputKind input_kind(const std::string& s) {
  auto v = input_kind_from_string(s);
  if (!v) throw InvalidArgument("input must be 'stylus' or 'finger'");
  return *v;
}

Signature signature_from_arrays(std::vector<double> x, std::vector<double> y, std::vector<double> p,
                                std::vector<std::int64_t> t, const std::string& input, const std::string& subject) {
  const std::size_t n = x.size();
  if (y.size() != n || p.size() != n || t.size() != n) throw InvalidArgument("x, y, p and t differ in length");
  const auto kind = input_kind(input);
  std::vector<SignatureSample> samples;
  samples.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    samples.push_back({x[i], y[i], p[i], t[i], p[i] > 0 || kind == InputKind::Finger ? PenState::Down : PenState::Up});
  }
  SignatureMeta meta{subject, kind, kind == InputKind::Stylus ? Scenario::Office : Scenario::Mobile,
                     Authenticity::Unknown, std::nullopt};
  return Signature(std::move(samples), std::move(meta));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "C++ core of the sigverify package";

  // Translators run newest first, so the subclass is registered last.
  auto& error = py::register_exception<Error>(m, "Error", PyExc_ValueError);
  py::register_exception<ParseError>(m, "ParseError", error.ptr());

  py::class_<Signature>(m, "Signature")
      .def(py::init(&signature_from_arrays), py::arg("x"), py::arg("y"), py::arg("p"), py::arg("t"),
           py::arg("input") = "stylus", py::arg("subject") = "subject")
      .def("__len__", &Signature::size)
      .def_property_readonly("x", &Signature::xs)
      .def_property_readonly("y", &Signature::ys)
      .def_property_readonly("p", &Signature::pressures)
      .def_property_readonly("t", &Signature::times)
      .def_property_readonly("subject", [](const Signature& s) { return s.meta().subject_id; })
      .def_property_readonly("input", [](const Signature& s) { return std::string(to_string(s.meta().input)); })
      .def("__eq__", [](const Signature& a, const Signature& b) { return a == b; });

  m.def("parse_signature_file", &parse_signature_file, py::arg("path"));
  m.def("write_signature_file", &write_signature_file, py::arg("signature"), py::arg("path"));

  m.def("remove_zero_pressure", &remove_zero_pressure);
  m.def("normalize_sigstat", &normalize_sigstat);
  m.def("normalize_mad", &normalize_mad);

  m.def("derivative", [](std::vector<double> s, std::vector<double> t) { return derivative(s, t); },
        py::arg("series"), py::arg("timestamps"));
  m.def(
      "global_features",
      [](const Signature& sig, bool extended) {
        const auto f = global_features(sig, extended ? GlobalFeatureSet::Extended : GlobalFeatureSet::Minimum);
        py::dict out;
        const auto names = f.names();
        for (std::size_t i = 0; i < names.size(); ++i) out[py::str(std::string(names[i]))] = f.values[i];
        return out;
      },
      py::arg("signature"), py::arg("extended") = true);
  m.def(
      "path_signature",
      [](std::vector<double> x, std::vector<double> y, int depth) { return path_signature(x, y, depth).terms; },
      py::arg("x"), py::arg("y"), py::arg("depth"),
      "Truncated signature terms, level by level; level 2 is (xx, xy, yx, yy).");

  py::class_<AlignmentResult>(m, "AlignmentResult")
      .def_readonly("accumulated_cost", &AlignmentResult::accumulated_cost)
      .def_readonly("normalized_score", &AlignmentResult::normalized_score)
      .def_readonly("path", &AlignmentResult::path)
      .def_property_readonly("path_length", &AlignmentResult::path_length);

  m.def(
      "dtw",
      [](const Array& a, const Array& b, const std::string& local) {
        LocalDistance kind;
        if (local == "euclidean") kind = LocalDistance::Euclidean;
        else if (local == "cityblock") kind = LocalDistance::Cityblock;
        else if (local == "sqeuclidean") kind = LocalDistance::SquaredEuclidean;
        else throw InvalidArgument("local must be euclidean, cityblock or sqeuclidean");
        return dtw(to_matrix(a), to_matrix(b), kind);
      },
      py::arg("a"), py::arg("b"), py::arg("local") = "euclidean");
  m.def(
      "soft_dtw",
      [](const Array& a, const Array& b, double gamma) {
        const auto r = soft_dtw(to_matrix(a), to_matrix(b), gamma);
        return py::make_tuple(r.value, to_array(r.gradient_wrt_first));
      },
      py::arg("a"), py::arg("b"), py::arg("gamma"), "Returns (value, gradient with respect to a).");
  m.def(
      "triplet_loss",
      [](const Array& anchor, const Array& pos, const Array& neg, double gamma, double margin) {
        return triplet_loss(to_matrix(anchor), to_matrix(pos), to_matrix(neg), gamma, margin);
      },
      py::arg("anchor"), py::arg("positive"), py::arg("negative"), py::arg("gamma"), py::arg("margin"));

  m.def("baseline_dtw_score", &baseline_dtw_score, py::arg("reference"), py::arg("questioned"));
  m.def(
      "sigstat_local_score",
      [](double d, double g_th, double f_th, double s) {
        const LocalThresholdModel model{g_th, f_th, s};
        model.validate();
        return sigstat_local_score(d, model);
      },
      py::arg("distance"), py::arg("g_th"), py::arg("f_th"), py::arg("s"));
  m.def(
      "sigstat_global_score",
      [](double d, double d_g_min, double d_f_med) {
        GlobalThresholdModel model;
        model.groups[InputKind::Stylus] = {d_g_min, d_f_med};
        return sigstat_global_score(d, model, InputKind::Stylus);
      },
      py::arg("distance"), py::arg("d_g_min"), py::arg("d_f_med"));
  m.def("tanh_normalize", &tanh_normalize, py::arg("score"), py::arg("mu"), py::arg("sigma"));
  m.def(
      "weighted_fusion",
      [](std::vector<double> scores, std::vector<double> weights) { return weighted_fusion(scores, weights); },
      py::arg("scores"), py::arg("weights"));

  m.def(
      "compute_eer",
      [](std::vector<double> genuine, std::vector<double> impostor) {
        const auto r = compute_eer(genuine, impostor);
        return py::make_tuple(r.eer_percent, r.threshold);
      },
      py::arg("genuine"), py::arg("impostor"), "Returns (eer_percent, threshold).");
  m.def(
      "evaluate",
      [](const std::filesystem::path& scores, const std::filesystem::path& labels, int task) {
        const auto s = parse_score_file(scores);
        const auto l = parse_label_file(labels);
        return evaluate_task(s, l, static_cast<Task>(task)).eer_percent;
      },
      py::arg("scores"), py::arg("labels"), py::arg("task") = 1, "EER in percent of a score file.");
  m.def(
      "rank_teams",
      [](const std::map<std::string, std::map<int, double>>& eers) {
        TeamEerTable table;
        for (const auto& [team, tasks] : eers) {
          for (const auto& [task, eer] : tasks) {
            if (task < 1 || task > 3) throw InvalidArgument("task must be 1, 2 or 3");
            table[team][static_cast<Task>(task)] = eer;
          }
        }
        std::vector<std::pair<std::string, int>> out;
        for (const auto& row : rank_teams(table)) out.emplace_back(row.team, row.total_points);
        return out;
      },
      py::arg("eers"), "{team: {task: eer}} -> [(team, total_points)] in ranking order.");

  m.def(
      "write_synthetic_dataset",
      [](std::uint64_t seed, int n_subjects, const std::filesystem::path& out_dir) {
        const auto manifest = write_synthetic_dataset(seed, n_subjects, out_dir);
        py::dict subsets;
        for (const auto& s : manifest.subsets) subsets[py::str(s.name)] = py::make_tuple(s.comparisons, s.labels);
        return subsets;
      },
      py::arg("seed"), py::arg("n_subjects"), py::arg("out_dir"),
      "Returns {subset: (comparisons_path, labels_path)}.");
  m.def(
      "run_protocol",
      [](const std::filesystem::path& comparisons, const std::string& pipeline_config, unsigned threads) {
        const auto tasks = parse_comparison_file(comparisons);
        const Pipeline pipeline(PipelineConfig::parse(pipeline_config, "<pipeline>"));
        std::vector<std::pair<std::string, double>> out;
        py::gil_scoped_release release;
        for (const auto& r : run_protocol(tasks, pipeline, comparisons.parent_path(), threads))
          out.emplace_back(r.comparison_id, r.score);
        return out;
      },
      py::arg("comparisons"), py::arg("pipeline_config") = "verifier = baseline_dtw\n", py::arg("threads") = 0,
      "Scores a comparison file; pipeline_config is the text of a pipeline file.");
}
