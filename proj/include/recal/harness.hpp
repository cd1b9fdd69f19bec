#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "recal/losses.hpp"
#include "recal/metrics.hpp"
#include "recal/recalibrator.hpp"

namespace recal {

enum class ExperimentKind { bernoulli_expert, adversarial, pattern_l1, covariate, csv };

ExperimentKind experiment_from_name(std::string_view name);
std::string_view experiment_name(ExperimentKind kind);

struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::bernoulli_expert;
  std::int64_t t = 20000;
  int m = 10;
  int n = 10;
  LossSpec loss = LossSpec::make(LossId::l2);
  std::uint64_t seed = 1;
  std::int64_t report_every = 100;
  std::string out;
  std::string curve_out;
  std::string input;

  // Experiment knobs beyond the CLI surface.
  double bernoulli_p = 0.5;
  double expert_low = 0.3;
  double expert_high = 0.7;
  std::string pattern = "001";
  std::vector<double> w_true = {1.0, -1.0, 0.5, -0.5};
  double baseline_weight_scale = 3.0;

  // Throws std::invalid_argument on violations (M >= N >= 2, T >= 1, ...).
  void validate() const;
};

struct ExperimentSummary {
  std::int64_t t = 0;
  double loss_recal_avg = 0.0;
  double loss_base_avg = 0.0;
  double cal_err_l1 = 0.0;
  double cal_err_l2 = 0.0;
  double base_cal_err_l1 = 0.0;
  double base_cal_err_l2 = 0.0;
  double regret = 0.0;
  double mean_prediction = 0.0;
};

struct ExperimentResult {
  std::vector<SeriesRow> series;
  ExperimentSummary summary;
  MetricsAccumulator metrics;
  Recalibrator recalibrator;
};

// Runs the online protocol for config.t steps: fetch features / raw
// forecast, observe_forecast, let the adversary react where applicable,
// reveal the outcome, observe_outcome, record metrics. Writes the series and
// curve CSVs when paths are configured.
ExperimentResult run_experiment(const ExperimentConfig& config, bool audit_history = false);

// Streams a CSV with p_f and y columns through a fresh recalibrator and
// writes the input annotated with a p_cal column.
ExperimentSummary recalibrate_csv(const std::string& input_path, const std::string& output_path,
                                  int m, int n, std::uint64_t seed, const LossSpec& loss);

std::string summary_text(const ExperimentSummary& summary);

}  // namespace recal
