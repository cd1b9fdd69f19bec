#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

#include "recal/calibrator.hpp"
#include "recal/errors.hpp"
#include "recal/harness.hpp"
#include "recal/losses.hpp"
#include "recal/metrics.hpp"
#include "recal/recalibrator.hpp"
#include "recal/rng.hpp"
#include "recal/streams.hpp"

namespace py = pybind11;
using namespace recal;

namespace {

SquareMatrix to_square(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != n) {
      throw std::domain_error("matrix rows must all have the same length as the row count");
    }
    for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
  }
  return m;
}

std::vector<std::vector<double>> from_square(const SquareMatrix& m) {
  std::vector<std::vector<double>> rows(m.size(), std::vector<double>(m.size()));
  for (int i = 0; i < m.size(); ++i)
    for (int j = 0; j < m.size(); ++j) rows[i][j] = m.at(i, j);
  return rows;
}

nlohmann::json parse_checkpoint(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw data_error(std::string("invalid checkpoint json: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online recalibration of black-box probability forecasters via "
            "internal-regret-matching calibration on a finite grid.";

  py::register_exception<data_error>(m, "DataError");
  py::register_exception<protocol_error>(m, "ProtocolError");
  py::register_exception<numeric_error>(m, "NumericError");

  py::enum_<LossId>(m, "LossId")
      .value("l2", LossId::l2)
      .value("log", LossId::log_loss)
      .value("misclass", LossId::misclass)
      .value("l1", LossId::l1)
      .value("hinge", LossId::hinge);

  py::class_<LossSpec>(m, "LossSpec")
      .def(py::init([](const std::string& name, double log_clamp) {
             return LossSpec::make(name, log_clamp);
           }),
           py::arg("name"), py::arg("log_clamp") = 1e-6)
      .def_static("make", py::overload_cast<LossId, double>(&LossSpec::make), py::arg("id"),
                  py::arg("log_clamp") = 1e-6)
      .def_readonly("id", &LossSpec::id)
      .def_readonly("bound_b", &LossSpec::bound_b)
      .def_readonly("log_clamp", &LossSpec::log_clamp)
      .def_property_readonly("name", [](const LossSpec& s) { return std::string(loss_name(s.id)); })
      .def("__repr__",
           [](const LossSpec& s) { return "LossSpec(" + std::string(loss_name(s.id)) + ")"; });

  m.def("eval_loss", &eval_loss, py::arg("loss"), py::arg("y"), py::arg("p"));
  m.def("expected_loss", &expected_loss, py::arg("loss"), py::arg("p"), py::arg("q"));
  m.def("is_proper_on_grid", &is_proper_on_grid, py::arg("loss"), py::arg("grid_n"),
        py::arg("tol") = 1e-9);

  py::class_<GridDistribution>(m, "GridDistribution")
      .def_readonly("weights", &GridDistribution::weights)
      .def("mean_grid_value", &GridDistribution::mean_grid_value)
      .def("sample", &GridDistribution::sample, py::arg("u"))
      .def("valid", &GridDistribution::valid, py::arg("tol") = 1e-9);

  m.def(
      "transition_matrix",
      [](const std::vector<std::vector<double>>& regrets) {
        return from_square(transition_matrix(to_square(regrets)));
      },
      py::arg("positive_regrets"),
      "Regret-flow transition matrix over grid levels, sharing one normalizer.");
  m.def(
      "fixed_point",
      [](const std::vector<std::vector<double>>& regrets) {
        return fixed_point(to_square(regrets));
      },
      py::arg("positive_regrets"),
      "Stationary distribution of the regret-flow transition matrix.");

  py::class_<CalibratorPrediction>(m, "CalibratorPrediction")
      .def_readonly("index", &CalibratorPrediction::index)
      .def_property_readonly(
          "weights", [](const CalibratorPrediction& p) { return p.distribution.weights; });

  py::class_<OnlineCalibrator>(m, "OnlineCalibrator")
      .def(py::init<int, std::uint64_t>(), py::arg("grid_n"), py::arg("rng_key") = 0)
      .def("predict", &OnlineCalibrator::predict, py::return_value_policy::copy)
      .def("update",
           [](OnlineCalibrator& c, int y) {
             const CalibratorPrediction pred = c.pending_prediction();
             c.update(pred.distribution, pred.index, y);
           },
           py::arg("y"), "Resolves the pending prediction with the revealed outcome.")
      .def("calibration_error", &OnlineCalibrator::calibration_error, py::arg("norm_p"))
      .def("grid_value", &OnlineCalibrator::grid_value, py::arg("index"))
      .def("regret_matrix",
           [](const OnlineCalibrator& c) { return from_square(c.regret_matrix()); })
      .def_property_readonly("grid_n", &OnlineCalibrator::grid_n)
      .def_property_readonly("steps", &OnlineCalibrator::steps)
      .def_property_readonly("has_pending", &OnlineCalibrator::has_pending)
      .def_property_readonly("grid_counts", &OnlineCalibrator::grid_counts)
      .def_property_readonly("outcome_sums", &OnlineCalibrator::outcome_sums)
      .def("to_json", [](const OnlineCalibrator& c) { return c.to_json().dump(); })
      .def_static("from_json",
                  [](const std::string& text) {
                    return OnlineCalibrator::from_json(parse_checkpoint(text));
                  },
                  py::arg("text"))
      .def("__eq__", [](const OnlineCalibrator& a, const OnlineCalibrator& b) { return a == b; });

  m.def("bucket_index", &bucket_index, py::arg("p_f"), py::arg("buckets_m"));

  py::class_<Recalibrator>(m, "Recalibrator")
      .def(py::init<int, int, std::uint64_t>(), py::arg("buckets_m"), py::arg("grid_n"),
           py::arg("seed"))
      .def("observe_forecast", &Recalibrator::observe_forecast, py::arg("p_f"))
      .def("observe_outcome", &Recalibrator::observe_outcome, py::arg("y"))
      .def_property_readonly("has_pending", &Recalibrator::has_pending)
      .def_property_readonly("pending_bucket", &Recalibrator::pending_bucket)
      .def_property_readonly("pending_mean", &Recalibrator::pending_mean)
      .def_property_readonly("buckets_m", &Recalibrator::buckets_m)
      .def_property_readonly("grid_n", &Recalibrator::grid_n)
      .def_property_readonly("seed", &Recalibrator::seed)
      .def_property_readonly("steps", &Recalibrator::steps)
      .def_property_readonly("bucket_counts", &Recalibrator::bucket_counts)
      .def("instance_active", &Recalibrator::instance_active, py::arg("bucket"))
      .def("instance", &Recalibrator::instance, py::arg("bucket"),
           py::return_value_policy::copy)
      .def("to_json", [](const Recalibrator& r) { return r.to_json().dump(); })
      .def_static("from_json",
                  [](const std::string& text) {
                    return Recalibrator::from_json(parse_checkpoint(text));
                  },
                  py::arg("text"))
      .def("__eq__", [](const Recalibrator& a, const Recalibrator& b) { return a == b; });

  py::class_<HistoryStep>(m, "HistoryStep")
      .def_readonly("p_f", &HistoryStep::p_f)
      .def_readonly("p_t", &HistoryStep::p_t)
      .def_readonly("y", &HistoryStep::y);

  py::class_<CurveBucket>(m, "CurveBucket")
      .def_readonly("lo", &CurveBucket::lo)
      .def_readonly("hi", &CurveBucket::hi)
      .def_readonly("mean_prediction", &CurveBucket::mean_prediction)
      .def_readonly("mean_outcome", &CurveBucket::mean_outcome)
      .def_readonly("count", &CurveBucket::count)
      .def_readonly("has_mean", &CurveBucket::has_mean);

  py::class_<MetricsAccumulator>(m, "MetricsAccumulator")
      .def(py::init<int, bool, bool>(), py::arg("resolution_n"), py::arg("audit_history") = false,
           py::arg("grid_strict") = true)
      .def("record", &MetricsAccumulator::record, py::arg("p_f"), py::arg("p_t"), py::arg("y"),
           py::arg("loss"))
      .def("calibration_error", &MetricsAccumulator::calibration_error, py::arg("norm_p"))
      .def("baseline_calibration_error", &MetricsAccumulator::baseline_calibration_error,
           py::arg("norm_p"))
      .def("calibration_curve",
           [](const MetricsAccumulator& m_, int buckets) {
             return m_.calibration_curve(buckets).buckets;
           },
           py::arg("buckets"))
      .def("baseline_calibration_curve",
           [](const MetricsAccumulator& m_, int buckets) {
             return m_.baseline_calibration_curve(buckets).buckets;
           },
           py::arg("buckets"))
      .def("recalibration_regret", &MetricsAccumulator::recalibration_regret)
      .def("average_recal_loss", &MetricsAccumulator::average_recal_loss)
      .def("average_baseline_loss", &MetricsAccumulator::average_baseline_loss)
      .def("mean_recal_prediction", &MetricsAccumulator::mean_recal_prediction)
      .def_property_readonly("steps", &MetricsAccumulator::steps)
      .def_property_readonly("resolution_n", &MetricsAccumulator::resolution_n)
      .def_property_readonly("level_counts", &MetricsAccumulator::level_counts)
      .def_property_readonly("level_outcome_sums", &MetricsAccumulator::level_outcome_sums)
      .def_property_readonly("audit_enabled", &MetricsAccumulator::audit_enabled)
      .def("history", [](const MetricsAccumulator& m_) { return m_.history(); });

  m.def("internal_regret", &internal_regret, py::arg("history"), py::arg("loss"),
        py::arg("grid_n"));
  m.def("external_regret", &external_regret, py::arg("history"), py::arg("loss"),
        py::arg("grid_n"));

  py::enum_<ExperimentKind>(m, "ExperimentKind")
      .value("bernoulli_expert", ExperimentKind::bernoulli_expert)
      .value("adversarial", ExperimentKind::adversarial)
      .value("pattern_l1", ExperimentKind::pattern_l1)
      .value("covariate", ExperimentKind::covariate)
      .value("csv", ExperimentKind::csv);

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("experiment", &ExperimentConfig::experiment)
      .def_readwrite("t", &ExperimentConfig::t)
      .def_readwrite("m", &ExperimentConfig::m)
      .def_readwrite("n", &ExperimentConfig::n)
      .def_readwrite("loss", &ExperimentConfig::loss)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("report_every", &ExperimentConfig::report_every)
      .def_readwrite("out", &ExperimentConfig::out)
      .def_readwrite("curve_out", &ExperimentConfig::curve_out)
      .def_readwrite("input", &ExperimentConfig::input)
      .def_readwrite("bernoulli_p", &ExperimentConfig::bernoulli_p)
      .def_readwrite("expert_low", &ExperimentConfig::expert_low)
      .def_readwrite("expert_high", &ExperimentConfig::expert_high)
      .def_readwrite("pattern", &ExperimentConfig::pattern)
      .def_readwrite("w_true", &ExperimentConfig::w_true)
      .def_readwrite("baseline_weight_scale", &ExperimentConfig::baseline_weight_scale)
      .def("validate", &ExperimentConfig::validate);

  py::class_<SeriesRow>(m, "SeriesRow")
      .def_readonly("t", &SeriesRow::t)
      .def_readonly("loss_recal_avg", &SeriesRow::loss_recal_avg)
      .def_readonly("loss_base_avg", &SeriesRow::loss_base_avg)
      .def_readonly("cal_err_l1", &SeriesRow::cal_err_l1)
      .def_readonly("cal_err_l2", &SeriesRow::cal_err_l2);

  py::class_<ExperimentSummary>(m, "ExperimentSummary")
      .def_readonly("t", &ExperimentSummary::t)
      .def_readonly("loss_recal_avg", &ExperimentSummary::loss_recal_avg)
      .def_readonly("loss_base_avg", &ExperimentSummary::loss_base_avg)
      .def_readonly("cal_err_l1", &ExperimentSummary::cal_err_l1)
      .def_readonly("cal_err_l2", &ExperimentSummary::cal_err_l2)
      .def_readonly("base_cal_err_l1", &ExperimentSummary::base_cal_err_l1)
      .def_readonly("base_cal_err_l2", &ExperimentSummary::base_cal_err_l2)
      .def_readonly("regret", &ExperimentSummary::regret)
      .def_readonly("mean_prediction", &ExperimentSummary::mean_prediction);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("series", &ExperimentResult::series)
      .def_readonly("summary", &ExperimentResult::summary)
      .def_readonly("metrics", &ExperimentResult::metrics)
      .def_readonly("recalibrator", &ExperimentResult::recalibrator);

  m.def("experiment_from_name",
        [](const std::string& name) { return experiment_from_name(name); }, py::arg("name"));
  m.def("experiment_name",
        [](ExperimentKind kind) { return std::string(experiment_name(kind)); }, py::arg("kind"));
  m.def("run_experiment", &run_experiment, py::arg("config"), py::arg("audit_history") = false,
        py::call_guard<py::gil_scoped_release>());
  m.def("recalibrate_csv", &recalibrate_csv, py::arg("input_path"), py::arg("output_path"),
        py::arg("m"), py::arg("n"), py::arg("seed"), py::arg("loss"),
        py::call_guard<py::gil_scoped_release>());
  m.def("summary_text", &summary_text, py::arg("summary"));
}
