#include "recal/forecasters.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recal {

namespace {
constexpr double kTinyFloor = 1e-12;
}

double logistic(double score) { return 1.0 / (1.0 + std::exp(-score)); }

OnlineLinearForecaster::OnlineLinearForecaster(std::vector<double> weights, TransferKind kind,
                                               double learning_rate, double l1_strength)
    : w_(std::move(weights)), kind_(kind), learning_rate_(learning_rate),
      l1_strength_(l1_strength) {
  if (w_.empty()) throw std::domain_error("weight vector must be nonempty");
  if (learning_rate < 0.0) throw std::domain_error("learning rate must be nonnegative");
  if (l1_strength < 0.0) throw std::domain_error("l1 strength must be nonnegative");
}

double OnlineLinearForecaster::score_of(const std::vector<double>& x) const {
  if (x.size() != w_.size()) throw std::domain_error("feature dimension mismatch");
  double s = 0.0;
  for (std::size_t k = 0; k < w_.size(); ++k) s += w_[k] * x[k];
  return s;
}

OnlineLinearForecaster::Prediction OnlineLinearForecaster::predict(const std::vector<double>& x) {
  const double s = score_of(x);
  if (kind_ == TransferKind::logistic) {
    return {s, logistic(s)};
  }
  abs_max_ = std::max({abs_max_, std::abs(s), kTinyFloor});
  return {s, (s + abs_max_) / (2.0 * abs_max_)};
}

void OnlineLinearForecaster::update(const std::vector<double>& x, int y) {
  if (y != 0 && y != 1) throw std::domain_error("outcome must be 0 or 1");
  const double s = score_of(x);
  updates_ += 1;
  const double rate = learning_rate_ / std::sqrt(static_cast<double>(updates_));
  if (kind_ == TransferKind::logistic) {
    const double g = logistic(s) - y;
    for (std::size_t k = 0; k < w_.size(); ++k) w_[k] -= rate * g * x[k];
  } else {
    const double label = y == 1 ? 1.0 : -1.0;
    if (label * s < 1.0) {
      for (std::size_t k = 0; k < w_.size(); ++k) w_[k] += rate * label * x[k];
    }
  }
  if (l1_strength_ > 0.0) {
    const double shrink = rate * l1_strength_;
    for (double& w : w_) {
      if (w > shrink) {
        w -= shrink;
      } else if (w < -shrink) {
        w += shrink;
      } else {
        w = 0.0;
      }
    }
  }
}

TwoValueExpert::TwoValueExpert(double low, double high) : low_(low), high_(high) {
  if (!(low >= 0.0 && high <= 1.0 && low < high)) {
    throw std::domain_error("expert values must satisfy 0 <= low < high <= 1");
  }
}

double TwoValueExpert::predict(int y_next) const {
  if (y_next != 0 && y_next != 1) throw std::domain_error("outcome must be 0 or 1");
  return y_next == 1 ? high_ : low_;
}

double noise_predict(CounterRng& rng) { return rng.next_unit() < 0.5 ? 0.0 : 1.0; }

}  // namespace recal
