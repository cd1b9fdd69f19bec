#pragma once

#include <cstdint>
#include <vector>

#include "recal/rng.hpp"

namespace recal {

enum class TransferKind { logistic, hinge };

// Online linear model with a probability transfer: logistic link, or hinge
// scores normalized by the running absolute maximum.
class OnlineLinearForecaster {
 public:
  OnlineLinearForecaster(std::vector<double> weights, TransferKind kind, double learning_rate,
                         double l1_strength = 0.0);

  struct Prediction {
    double score;
    double p_f;
  };

  // Hinge transfer folds |score| into the running normalizer first, so the
  // current score always maps inside [0,1].
  Prediction predict(const std::vector<double>& x);
  // One subgradient step (logistic or hinge on labels +-1) at rate
  // learning_rate/sqrt(t), then soft-thresholding for the l1 penalty.
  void update(const std::vector<double>& x, int y);

  const std::vector<double>& weights() const { return w_; }
  TransferKind kind() const { return kind_; }
  double abs_max() const { return abs_max_; }
  std::int64_t updates() const { return updates_; }

 private:
  double score_of(const std::vector<double>& x) const;

  std::vector<double> w_;
  TransferKind kind_;
  double learning_rate_;
  double l1_strength_;
  double abs_max_ = 0.0;
  std::int64_t updates_ = 0;
};

double logistic(double score);

// Clairvoyant expert that reports one of two fixed values depending on the
// outcome it is about to see.
class TwoValueExpert {
 public:
  TwoValueExpert(double low = 0.3, double high = 0.7);
  double predict(int y_next) const;
  double low() const { return low_; }
  double high() const { return high_; }

 private:
  double low_;
  double high_;
};

// Coin-flip forecast: 0.0 or 1.0 with equal probability.
double noise_predict(CounterRng& rng);

}  // namespace recal
