#include "recal/harness.hpp"

#include <charconv>
#include <fstream>
#include <stdexcept>

#include "recal/errors.hpp"
#include "recal/forecasters.hpp"
#include "recal/rng.hpp"
#include "recal/streams.hpp"

namespace recal {
namespace {

// Substream tags for harness-owned randomness, distinct from stream tags.
constexpr std::uint64_t kOutcomeTag = 0x100u;
constexpr std::uint64_t kNoiseTag = 0x101u;
constexpr std::uint64_t kSynthTag = 0x102u;

}  // namespace

ExperimentKind experiment_from_name(std::string_view name) {
  if (name == "bernoulli_expert") return ExperimentKind::bernoulli_expert;
  if (name == "adversarial") return ExperimentKind::adversarial;
  if (name == "pattern_l1") return ExperimentKind::pattern_l1;
  if (name == "covariate") return ExperimentKind::covariate;
  if (name == "csv") return ExperimentKind::csv;
  throw std::invalid_argument("unknown experiment: " + std::string(name));
}

std::string_view experiment_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::bernoulli_expert: return "bernoulli_expert";
    case ExperimentKind::adversarial: return "adversarial";
    case ExperimentKind::pattern_l1: return "pattern_l1";
    case ExperimentKind::covariate: return "covariate";
    case ExperimentKind::csv: return "csv";
  }
  throw std::invalid_argument("unknown experiment kind");
}

void ExperimentConfig::validate() const {
  if (t < 1) throw std::invalid_argument("T must be at least 1");
  if (n < 2) throw std::invalid_argument("N must be at least 2");
  if (m < n) throw std::invalid_argument("M must be at least N");
  if (report_every < 1) throw std::invalid_argument("report-every must be at least 1");
  if (!(bernoulli_p >= 0.0 && bernoulli_p <= 1.0)) {
    throw std::invalid_argument("bernoulli probability must lie in [0,1]");
  }
  if (experiment == ExperimentKind::csv && input.empty()) {
    throw std::invalid_argument("csv experiment requires an input path");
  }
  if (pattern.empty()) throw std::invalid_argument("pattern must be nonempty");
  if (w_true.empty()) throw std::invalid_argument("w_true must be nonempty");
}

ExperimentResult run_experiment(const ExperimentConfig& config, bool audit_history) {
  config.validate();

  std::vector<int> outcomes;
  std::vector<StreamRecord> records;
  TwoValueExpert expert(config.expert_low, config.expert_high);
  CounterRng noise_rng = CounterRng::derive(config.seed, kNoiseTag);
  OnlineLinearForecaster baseline({1.0}, TransferKind::logistic, 0.0);

  switch (config.experiment) {
    case ExperimentKind::bernoulli_expert:
      outcomes = bernoulli_stream(config.bernoulli_p, config.t,
                                  CounterRng::derive_key(config.seed, kOutcomeTag));
      break;
    case ExperimentKind::adversarial:
      break;
    case ExperimentKind::pattern_l1:
      outcomes = pattern_stream(config.pattern, config.t);
      break;
    case ExperimentKind::covariate: {
      records = logistic_synth_stream(config.w_true, config.t,
                                      CounterRng::derive_key(config.seed, kSynthTag));
      std::vector<double> scaled = config.w_true;
      for (double& w : scaled) w *= config.baseline_weight_scale;
      baseline = OnlineLinearForecaster(std::move(scaled), TransferKind::logistic, 0.0);
      break;
    }
    case ExperimentKind::csv: {
      records = read_csv(config.input);
      if (static_cast<std::int64_t>(records.size()) < config.t) {
        throw data_error("input has " + std::to_string(records.size()) +
                         " rows but the experiment needs " + std::to_string(config.t));
      }
      for (std::size_t i = 0; i < static_cast<std::size_t>(config.t); ++i) {
        if (!records[i].p_f) {
          throw data_error("row " + std::to_string(i + 1) + ": missing p_f value");
        }
      }
      break;
    }
  }

  ExperimentResult result{{},
                          {},
                          MetricsAccumulator(config.n, audit_history),
                          Recalibrator(config.m, config.n, config.seed)};
  MetricsAccumulator& metrics = result.metrics;
  Recalibrator& recal = result.recalibrator;

  for (std::int64_t step = 0; step < config.t; ++step) {
    double p_f = 0.0;
    switch (config.experiment) {
      case ExperimentKind::bernoulli_expert: p_f = expert.predict(outcomes[step]); break;
      case ExperimentKind::adversarial: p_f = noise_predict(noise_rng); break;
      case ExperimentKind::pattern_l1: p_f = 0.0; break;
      case ExperimentKind::covariate: p_f = baseline.predict(records[step].x).p_f; break;
      case ExperimentKind::csv: p_f = *records[step].p_f; break;
    }

    const double p_t = recal.observe_forecast(p_f);

    int y = 0;
    if (config.experiment == ExperimentKind::adversarial) {
      y = adversarial_outcome(recal.pending_mean());
    } else if (config.experiment == ExperimentKind::covariate ||
               config.experiment == ExperimentKind::csv) {
      y = records[step].y;
    } else {
      y = outcomes[step];
    }

    recal.observe_outcome(y);
    metrics.record(p_f, p_t, y, config.loss);

    const std::int64_t done = step + 1;
    if (done % config.report_every == 0 || done == config.t) {
      result.series.push_back({done, metrics.average_recal_loss(), metrics.average_baseline_loss(),
                               metrics.calibration_error(1), metrics.calibration_error(2)});
    }
  }

  result.summary = {config.t,
                    metrics.average_recal_loss(),
                    metrics.average_baseline_loss(),
                    metrics.calibration_error(1),
                    metrics.calibration_error(2),
                    metrics.baseline_calibration_error(1),
                    metrics.baseline_calibration_error(2),
                    metrics.recalibration_regret(),
                    metrics.mean_recal_prediction()};

  if (!config.out.empty()) write_series_csv(config.out, result.series);
  if (!config.curve_out.empty()) write_curve_csv(config.curve_out, metrics.calibration_curve(config.m));
  return result;
}

ExperimentSummary recalibrate_csv(const std::string& input_path, const std::string& output_path,
                                  int m, int n, std::uint64_t seed, const LossSpec& loss) {
  if (n < 2) throw std::invalid_argument("N must be at least 2");
  if (m < n) throw std::invalid_argument("M must be at least N");
  const std::vector<StreamRecord> records = read_csv(input_path);
  if (records.empty()) throw data_error("input has no data rows: " + input_path);
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (!records[i].p_f) throw data_error("row " + std::to_string(i + 1) + ": missing p_f value");
  }

  Recalibrator recal(m, n, seed);
  MetricsAccumulator metrics(n);
  std::vector<double> calibrated(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double p_t = recal.observe_forecast(*records[i].p_f);
    recal.observe_outcome(records[i].y);
    metrics.record(*records[i].p_f, p_t, records[i].y, loss);
    calibrated[i] = p_t;
  }

  std::ofstream out(output_path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + output_path);
  const std::size_t dim = records.front().x.size();
  for (std::size_t k = 0; k < dim; ++k) out << 'x' << k << ',';
  out << "p_f,y,p_cal\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t k = 0; k < dim; ++k) out << format_double(records[i].x[k]) << ',';
    out << format_double(*records[i].p_f) << ',' << records[i].y << ','
        << format_double(calibrated[i]) << '\n';
  }
  if (!out) throw data_error("failed writing output file: " + output_path);

  return {static_cast<std::int64_t>(records.size()),
          metrics.average_recal_loss(),
          metrics.average_baseline_loss(),
          metrics.calibration_error(1),
          metrics.calibration_error(2),
          metrics.baseline_calibration_error(1),
          metrics.baseline_calibration_error(2),
          metrics.recalibration_regret(),
          metrics.mean_recal_prediction()};
}

std::string summary_text(const ExperimentSummary& s) {
  std::string text;
  text += "steps=" + std::to_string(s.t) + "\n";
  text += "loss_recal_avg=" + format_double(s.loss_recal_avg) + "\n";
  text += "loss_base_avg=" + format_double(s.loss_base_avg) + "\n";
  text += "cal_err_l1=" + format_double(s.cal_err_l1) + "\n";
  text += "cal_err_l2=" + format_double(s.cal_err_l2) + "\n";
  text += "base_cal_err_l1=" + format_double(s.base_cal_err_l1) + "\n";
  text += "base_cal_err_l2=" + format_double(s.base_cal_err_l2) + "\n";
  text += "regret=" + format_double(s.regret) + "\n";
  text += "mean_prediction=" + format_double(s.mean_prediction) + "\n";
  return text;
}

}  // namespace recal
