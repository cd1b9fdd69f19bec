#include "recal/metrics.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "recal/errors.hpp"
#include "recal/recalibrator.hpp"

namespace recal {
namespace {

int grid_index_of(double p, int n, bool strict) {
  const double scaled = p * n;
  const int i = static_cast<int>(std::lround(scaled));
  if (strict && std::abs(scaled - i) > 1e-9 * n) {
    throw std::domain_error("prediction is not on the grid");
  }
  return std::min(std::max(i, 0), n);
}

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error(std::string(what) + " must lie in [0,1]");
}

double level_gap_error(const std::vector<std::int64_t>& counts,
                       const std::vector<std::int64_t>& outcome_sums,
                       const std::vector<double>& targets, std::int64_t total, int norm_p) {
  double err = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const double rho = static_cast<double>(outcome_sums[i]) / static_cast<double>(counts[i]);
    const double d = std::abs(rho - targets[i]);
    const double w = static_cast<double>(counts[i]) / static_cast<double>(total);
    err += (norm_p == 1 ? d : d * d) * w;
  }
  return err;
}

}  // namespace

MetricsAccumulator::MetricsAccumulator(int resolution_n, bool audit_history, bool grid_strict)
    : n_(resolution_n),
      audit_(audit_history),
      strict_(grid_strict),
      level_counts_(resolution_n + 1, 0),
      level_outcome_sums_(resolution_n + 1, 0),
      raw_counts_(resolution_n, 0),
      raw_outcome_sums_(resolution_n, 0),
      raw_forecast_sums_(resolution_n, 0.0) {
  if (resolution_n < 1) throw std::domain_error("resolution must be positive");
}

void MetricsAccumulator::record(double p_f, double p_t, int y, const LossSpec& loss) {
  check_probability(p_f, "raw forecast");
  check_probability(p_t, "prediction");
  if (y != 0 && y != 1) throw std::domain_error("outcome must be 0 or 1");
  const int level = grid_index_of(p_t, n_, strict_);
  const int raw_bucket = bucket_index(p_f, n_);
  cum_loss_recal_ += eval_loss(loss, y, p_t);
  cum_loss_baseline_ += eval_loss(loss, y, p_f);
  level_counts_[level] += 1;
  level_outcome_sums_[level] += y;
  raw_counts_[raw_bucket] += 1;
  raw_outcome_sums_[raw_bucket] += y;
  raw_forecast_sums_[raw_bucket] += p_f;
  steps_ += 1;
  if (audit_) history_.push_back({p_f, p_t, y});
}

void MetricsAccumulator::require_nonempty() const {
  if (steps_ < 1) throw std::logic_error("no steps recorded");
}

double MetricsAccumulator::calibration_error(int norm_p) const {
  if (norm_p != 1 && norm_p != 2) throw std::domain_error("norm_p must be 1 or 2");
  require_nonempty();
  std::vector<double> targets(n_ + 1);
  for (int i = 0; i <= n_; ++i) targets[i] = static_cast<double>(i) / n_;
  return level_gap_error(level_counts_, level_outcome_sums_, targets, steps_, norm_p);
}

double MetricsAccumulator::baseline_calibration_error(int norm_p) const {
  if (norm_p != 1 && norm_p != 2) throw std::domain_error("norm_p must be 1 or 2");
  require_nonempty();
  std::vector<double> targets(n_, 0.0);
  for (int b = 0; b < n_; ++b) {
    if (raw_counts_[b] > 0) {
      targets[b] = raw_forecast_sums_[b] / static_cast<double>(raw_counts_[b]);
    }
  }
  return level_gap_error(raw_counts_, raw_outcome_sums_, targets, steps_, norm_p);
}

namespace {

CalibrationCurve curve_from_levels(const std::vector<std::int64_t>& counts,
                                   const std::vector<std::int64_t>& outcome_sums,
                                   const std::vector<double>& prediction_sums, int buckets) {
  CalibrationCurve curve;
  curve.buckets.resize(buckets);
  std::vector<double> pred(buckets, 0.0);
  std::vector<std::int64_t> cnt(buckets, 0), out(buckets, 0);
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] == 0) continue;
    const double rep = prediction_sums[i] / static_cast<double>(counts[i]);
    const int b = bucket_index(rep, buckets);
    cnt[b] += counts[i];
    out[b] += outcome_sums[i];
    pred[b] += prediction_sums[i];
  }
  for (int b = 0; b < buckets; ++b) {
    CurveBucket& cb = curve.buckets[b];
    cb.lo = static_cast<double>(b) / buckets;
    cb.hi = static_cast<double>(b + 1) / buckets;
    cb.count = cnt[b];
    if (cnt[b] > 0) {
      cb.mean_prediction = pred[b] / static_cast<double>(cnt[b]);
      cb.mean_outcome = static_cast<double>(out[b]) / static_cast<double>(cnt[b]);
      cb.has_mean = true;
    }
  }
  return curve;
}

}  // namespace

CalibrationCurve MetricsAccumulator::calibration_curve(int buckets) const {
  if (buckets < 1) throw std::domain_error("bucket count must be positive");
  require_nonempty();
  std::vector<double> pred_sums(n_ + 1);
  for (int i = 0; i <= n_; ++i) {
    pred_sums[i] = static_cast<double>(level_counts_[i]) * (static_cast<double>(i) / n_);
  }
  return curve_from_levels(level_counts_, level_outcome_sums_, pred_sums, buckets);
}

CalibrationCurve MetricsAccumulator::baseline_calibration_curve(int buckets) const {
  if (buckets < 1) throw std::domain_error("bucket count must be positive");
  require_nonempty();
  return curve_from_levels(raw_counts_, raw_outcome_sums_, raw_forecast_sums_, buckets);
}

double MetricsAccumulator::recalibration_regret() const {
  require_nonempty();
  return (cum_loss_recal_ - cum_loss_baseline_) / static_cast<double>(steps_);
}

double MetricsAccumulator::average_recal_loss() const {
  require_nonempty();
  return cum_loss_recal_ / static_cast<double>(steps_);
}

double MetricsAccumulator::average_baseline_loss() const {
  require_nonempty();
  return cum_loss_baseline_ / static_cast<double>(steps_);
}

double MetricsAccumulator::mean_recal_prediction() const {
  require_nonempty();
  double sum = 0.0;
  for (int i = 0; i <= n_; ++i) {
    sum += static_cast<double>(level_counts_[i]) * (static_cast<double>(i) / n_);
  }
  return sum / static_cast<double>(steps_);
}

const std::vector<HistoryStep>& MetricsAccumulator::history() const {
  if (!audit_) throw std::logic_error("history auditing is disabled");
  return history_;
}

namespace {

struct LevelTotals {
  std::vector<std::int64_t> counts;
  std::vector<std::int64_t> outcome_sums;
};

LevelTotals tabulate(const std::vector<std::pair<double, int>>& history, int grid_n) {
  LevelTotals totals{std::vector<std::int64_t>(grid_n + 1, 0),
                     std::vector<std::int64_t>(grid_n + 1, 0)};
  for (const auto& [p, y] : history) {
    check_probability(p, "prediction");
    if (y != 0 && y != 1) throw std::domain_error("outcome must be 0 or 1");
    const int i = grid_index_of(p, grid_n, true);
    totals.counts[i] += 1;
    totals.outcome_sums[i] += y;
  }
  return totals;
}

// Sum of loss(y_t, q) over the plays at one level, from its (count, sum_y).
double level_loss_sum(const LossSpec& loss, std::int64_t count, std::int64_t sum_y, double q) {
  return static_cast<double>(count - sum_y) * eval_loss(loss, 0, q) +
         static_cast<double>(sum_y) * eval_loss(loss, 1, q);
}

}  // namespace

double internal_regret(const std::vector<std::pair<double, int>>& history, const LossSpec& loss,
                       int grid_n) {
  if (grid_n < 1) throw std::domain_error("grid resolution must be positive");
  const LevelTotals totals = tabulate(history, grid_n);
  double best = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    if (totals.counts[i] == 0) continue;
    const double own =
        level_loss_sum(loss, totals.counts[i], totals.outcome_sums[i], double(i) / grid_n);
    for (int j = 0; j <= grid_n; ++j) {
      if (j == i) continue;
      const double alt =
          level_loss_sum(loss, totals.counts[i], totals.outcome_sums[i], double(j) / grid_n);
      best = std::max(best, own - alt);
    }
  }
  return best;
}

double external_regret(const std::vector<std::pair<double, int>>& history, const LossSpec& loss,
                       int grid_n) {
  if (grid_n < 1) throw std::domain_error("grid resolution must be positive");
  const LevelTotals totals = tabulate(history, grid_n);
  double realized = 0.0;
  for (int i = 0; i <= grid_n; ++i) {
    realized += level_loss_sum(loss, totals.counts[i], totals.outcome_sums[i], double(i) / grid_n);
  }
  std::int64_t count_all = 0, sum_all = 0;
  for (int i = 0; i <= grid_n; ++i) {
    count_all += totals.counts[i];
    sum_all += totals.outcome_sums[i];
  }
  double best_fixed = 0.0;
  bool first = true;
  for (int j = 0; j <= grid_n; ++j) {
    const double total = level_loss_sum(loss, count_all, sum_all, double(j) / grid_n);
    if (first || total < best_fixed) {
      best_fixed = total;
      first = false;
    }
  }
  return realized - best_fixed;
}

std::string format_double(double value) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), res.ptr);
}

void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  out << "t,loss_recal_avg,loss_base_avg,cal_err_l1,cal_err_l2\n";
  for (const SeriesRow& r : rows) {
    out << r.t << ',' << format_double(r.loss_recal_avg) << ',' << format_double(r.loss_base_avg)
        << ',' << format_double(r.cal_err_l1) << ',' << format_double(r.cal_err_l2) << '\n';
  }
  if (!out) throw data_error("failed writing output file: " + path);
}

void write_curve_csv(const std::string& path, const CalibrationCurve& curve) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  out << "bucket_lo,bucket_hi,mean_pred,mean_outcome,count\n";
  for (const CurveBucket& b : curve.buckets) {
    out << format_double(b.lo) << ',' << format_double(b.hi) << ',';
    if (b.has_mean) {
      out << format_double(b.mean_prediction) << ',' << format_double(b.mean_outcome);
    } else {
      out << ',';
    }
    out << ',' << b.count << '\n';
  }
  if (!out) throw data_error("failed writing output file: " + path);
}

}  // namespace recal
