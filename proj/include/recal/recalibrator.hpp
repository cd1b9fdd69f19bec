#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "recal/calibrator.hpp"

namespace recal {

// Interval index of a raw forecast under the partition
// [0,1/M), [1/M,2/M), ..., [(M-1)/M, 1]; the last interval is closed.
int bucket_index(double p_f, int buckets_m);

// Wraps a black-box forecaster: raw forecasts are bucketed into M intervals
// and each bucket delegates to its own OnlineCalibrator over the grid {i/N}.
// observe_forecast and observe_outcome must strictly alternate.
class Recalibrator {
 public:
  Recalibrator(int buckets_m, int grid_n, std::uint64_t seed);

  // Routes p_f to its bucket, draws that instance's prediction, and returns
  // the sampled grid value. The outcome must arrive before the next forecast.
  double observe_forecast(double p_f);
  void observe_outcome(int y);

  bool has_pending() const { return pending_bucket_.has_value(); }
  int pending_bucket() const;
  // Mean of the pending prediction's distribution over grid values.
  double pending_mean() const;

  int buckets_m() const { return m_; }
  int grid_n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::int64_t steps() const { return steps_; }
  const std::vector<std::int64_t>& bucket_counts() const { return counts_; }

  bool instance_active(int bucket) const;
  const OnlineCalibrator& instance(int bucket) const;

  nlohmann::json to_json() const;
  static Recalibrator from_json(const nlohmann::json& doc);

  bool operator==(const Recalibrator&) const = default;

 private:
  OnlineCalibrator& instance_for(int bucket);

  int m_;
  int n_;
  std::uint64_t seed_;
  std::vector<std::optional<OnlineCalibrator>> instances_;
  std::vector<std::int64_t> counts_;
  std::int64_t steps_ = 0;
  std::optional<int> pending_bucket_;
};

}  // namespace recal
