#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "recal/rng.hpp"

#include <json.hpp>

namespace recal {

// Dense row-major square matrix, sized for regret tables ((N+1) <= 101).
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n) * n, 0.0) {}

  int size() const { return n_; }
  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<double>& data() const { return a_; }
  std::vector<double>& data() { return a_; }

  bool operator==(const SquareMatrix&) const = default;

 private:
  int n_ = 0;
  std::vector<double> a_;
};

// Probability vector over the prediction grid {i/N}.
struct GridDistribution {
  std::vector<double> weights;

  int size() const { return static_cast<int>(weights.size()); }
  bool valid(double tol = 1e-9) const;
  // Inverse-CDF sample for a uniform u in [0, 1).
  int sample(double u) const;
  double mean_grid_value() const;

  bool operator==(const GridDistribution&) const = default;
};

// Transition matrix of the positive-part regret table: mass moves from i to
// j proportionally to regret[i][j], scaled by a common normalizer so that
// stationary weights balance regret flow; rows without positive regret
// self-loop.
SquareMatrix transition_matrix(const SquareMatrix& positive_regrets);

// Stationary distribution of transition_matrix(positive_regrets), found by
// damped power iteration from the uniform start (iteration cap
// 10*(N+1)^2, residual tolerance 1e-8, eigen-solve fallback on cap hit).
// An all-zero table yields the uniform distribution.
GridDistribution fixed_point(const SquareMatrix& positive_regrets);

// Residual tolerance fixed_point guarantees on ||mu - mu Q||_inf.
inline constexpr double kFixedPointTolerance = 1e-8;

struct CalibratorPrediction {
  GridDistribution distribution;
  int index = 0;

  bool operator==(const CalibratorPrediction&) const = default;
};

// Randomized forecaster over the grid {i/N} that minimizes internal regret
// of the per-step losses (y - i/N)^2. predict() and update() must alternate;
// predict() is idempotent until the matching update() arrives.
class OnlineCalibrator {
 public:
  OnlineCalibrator(int grid_n, std::uint64_t rng_key);

  const CalibratorPrediction& predict();
  void update(const GridDistribution& distribution, int sampled_index, int y);

  // Pending prediction awaiting its outcome; throws if none is pending.
  const CalibratorPrediction& pending_prediction() const;

  // Weighted l_p distance between per-level outcome frequencies and the grid
  // values, norm_p in {1, 2}. Levels never played contribute zero.
  double calibration_error(int norm_p) const;

  int grid_n() const { return grid_n_; }
  std::int64_t steps() const { return steps_; }
  double grid_value(int i) const { return static_cast<double>(i) / grid_n_; }
  const SquareMatrix& regret_matrix() const { return regret_; }
  const std::vector<std::int64_t>& grid_counts() const { return counts_; }
  const std::vector<std::int64_t>& outcome_sums() const { return outcome_sums_; }
  std::uint64_t rng_key() const { return rng_key_; }
  bool has_pending() const { return pending_.has_value(); }

  nlohmann::json to_json() const;
  static OnlineCalibrator from_json(const nlohmann::json& doc);

  bool operator==(const OnlineCalibrator&) const = default;

 private:
  int grid_n_;
  std::uint64_t rng_key_;
  SquareMatrix regret_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> outcome_sums_;
  std::int64_t steps_ = 0;
  std::optional<CalibratorPrediction> pending_;
};

}  // namespace recal
