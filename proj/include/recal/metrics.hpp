#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "recal/losses.hpp"

namespace recal {

struct CurveBucket {
  double lo = 0.0;
  double hi = 0.0;
  double mean_prediction = 0.0;
  double mean_outcome = 0.0;
  std::int64_t count = 0;
  bool has_mean = false;
};

struct CalibrationCurve {
  std::vector<CurveBucket> buckets;
};

struct HistoryStep {
  double p_f;
  double p_t;
  int y;
};

// Running evaluation state for one recalibrated stream: per-grid-level counts
// for the calibrated predictions, bucketed counts for raw forecasts,
// cumulative losses, and (opt-in) the full step history for regret audits.
class MetricsAccumulator {
 public:
  explicit MetricsAccumulator(int resolution_n, bool audit_history = false,
                              bool grid_strict = true);

  void record(double p_f, double p_t, int y, const LossSpec& loss);

  // Weighted l_p gap between per-level outcome frequencies and grid values
  // for the calibrated predictions; empty levels contribute zero.
  double calibration_error(int norm_p) const;
  // Same gap for the raw forecasts, bucketed at the grid resolution, with
  // each bucket compared against its mean forecast.
  double baseline_calibration_error(int norm_p) const;

  // Reliability curve of the calibrated predictions; empty buckets carry
  // count 0 and no means.
  CalibrationCurve calibration_curve(int buckets) const;
  CalibrationCurve baseline_calibration_curve(int buckets) const;

  // Average per-step loss gap between the calibrated and raw forecasts.
  double recalibration_regret() const;

  double average_recal_loss() const;
  double average_baseline_loss() const;
  double mean_recal_prediction() const;

  std::int64_t steps() const { return steps_; }
  int resolution_n() const { return n_; }
  const std::vector<std::int64_t>& level_counts() const { return level_counts_; }
  const std::vector<std::int64_t>& level_outcome_sums() const { return level_outcome_sums_; }
  bool audit_enabled() const { return audit_; }
  const std::vector<HistoryStep>& history() const;

 private:
  void require_nonempty() const;

  int n_;
  bool audit_;
  bool strict_;
  std::vector<std::int64_t> level_counts_;
  std::vector<std::int64_t> level_outcome_sums_;
  std::vector<std::int64_t> raw_counts_;
  std::vector<std::int64_t> raw_outcome_sums_;
  std::vector<double> raw_forecast_sums_;
  double cum_loss_recal_ = 0.0;
  double cum_loss_baseline_ = 0.0;
  std::int64_t steps_ = 0;
  std::vector<HistoryStep> history_;
};

// Largest retrospective gain from rerouting all plays of one grid value to
// another; never negative. Predictions must lie on the grid {i/N}.
double internal_regret(const std::vector<std::pair<double, int>>& history, const LossSpec& loss,
                       int grid_n);
// Realized cumulative loss minus the best fixed grid prediction's loss.
double external_regret(const std::vector<std::pair<double, int>>& history, const LossSpec& loss,
                       int grid_n);

struct SeriesRow {
  std::int64_t t = 0;
  double loss_recal_avg = 0.0;
  double loss_base_avg = 0.0;
  double cal_err_l1 = 0.0;
  double cal_err_l2 = 0.0;
};

void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows);
void write_curve_csv(const std::string& path, const CalibrationCurve& curve);

// Shortest round-trip decimal form, locale-free.
std::string format_double(double value);

}  // namespace recal
