#include "recal/calibrator.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <json.hpp>

#include "recal/errors.hpp"

namespace recal {
namespace {

double residual_inf(const GridDistribution& mu, const SquareMatrix& q) {
  const int n = q.size();
  double worst = 0.0;
  for (int j = 0; j < n; ++j) {
    double flow = 0.0;
    for (int i = 0; i < n; ++i) flow += mu.weights[i] * q.at(i, j);
    worst = std::max(worst, std::abs(mu.weights[j] - flow));
  }
  return worst;
}

void normalize(std::vector<double>& w) {
  double sum = 0.0;
  for (double v : w) sum += v;
  if (sum <= 0.0) {
    std::fill(w.begin(), w.end(), 1.0 / static_cast<double>(w.size()));
    return;
  }
  for (double& v : w) v /= sum;
}

// Eigenvector and least-squares candidates for the stationary distribution,
// tried when power iteration hits its cap.
GridDistribution stationary_fallback(const SquareMatrix& q, const GridDistribution& iterate) {
  const int n = q.size();
  Eigen::MatrixXd qt(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) qt(j, i) = q.at(i, j);

  GridDistribution best = iterate;
  double best_residual = residual_inf(best, q);

  auto consider = [&](std::vector<double> w) {
    for (double& v : w) v = std::max(v, 0.0);
    double sum = 0.0;
    for (double v : w) sum += v;
    if (sum <= 0.0) return;
    for (double& v : w) v /= sum;
    GridDistribution cand{std::move(w)};
    const double r = residual_inf(cand, q);
    if (r < best_residual) {
      best_residual = r;
      best = std::move(cand);
    }
  };

  Eigen::EigenSolver<Eigen::MatrixXd> es(qt);
  if (es.info() == Eigen::Success) {
    for (int k = 0; k < n; ++k) {
      if (std::abs(es.eigenvalues()(k) - std::complex<double>(1.0, 0.0)) > 1e-6) continue;
      std::vector<double> w(n), wneg(n);
      for (int i = 0; i < n; ++i) {
        w[i] = es.eigenvectors()(i, k).real();
        wneg[i] = -w[i];
      }
      consider(w);
      consider(wneg);
    }
  }

  // Least squares on the stacked system [Q^T - I; 1^T] mu = [0; 1].
  Eigen::MatrixXd a(n + 1, n);
  a.topRows(n) = qt - Eigen::MatrixXd::Identity(n, n);
  a.bottomRows(1).setOnes();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(n + 1);
  b(n) = 1.0;
  Eigen::VectorXd x = a.colPivHouseholderQr().solve(b);
  consider(std::vector<double>(x.data(), x.data() + n));

  if (best_residual > kFixedPointTolerance) {
    throw numeric_error("fixed_point did not converge", best_residual);
  }
  return best;
}

void check_positive_parts(const SquareMatrix& m) {
  const int n = m.size();
  if (n == 0) throw std::domain_error("empty regret matrix");
  for (int i = 0; i < n; ++i) {
    if (m.at(i, i) != 0.0) throw std::domain_error("regret diagonal must be zero");
    for (int j = 0; j < n; ++j) {
      if (m.at(i, j) < 0.0) throw std::domain_error("positive-part regrets must be nonnegative");
    }
  }
}

}  // namespace

bool GridDistribution::valid(double tol) const {
  if (weights.empty()) return false;
  double sum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) return false;
    sum += w;
  }
  return std::abs(sum - 1.0) <= tol;
}

int GridDistribution::sample(double u) const {
  double cum = 0.0;
  int last_positive = 0;
  for (int i = 0; i < size(); ++i) {
    if (weights[i] <= 0.0) continue;
    cum += weights[i];
    last_positive = i;
    if (u < cum) return i;
  }
  return last_positive;
}

double GridDistribution::mean_grid_value() const {
  const int n = size() - 1;
  if (n <= 0) return 0.0;
  double mean = 0.0;
  for (int i = 0; i < size(); ++i) mean += weights[i] * (static_cast<double>(i) / n);
  return mean;
}

SquareMatrix transition_matrix(const SquareMatrix& positive_regrets) {
  check_positive_parts(positive_regrets);
  const int n = positive_regrets.size();
  double kappa = 0.0;
  std::vector<double> row_sum(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) row_sum[i] += positive_regrets.at(i, j);
    kappa = std::max(kappa, row_sum[i]);
  }
  SquareMatrix q(n);
  if (kappa <= 0.0) {
    for (int i = 0; i < n; ++i) q.at(i, i) = 1.0;
    return q;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) q.at(i, j) = positive_regrets.at(i, j) / kappa;
    }
    q.at(i, i) = 1.0 - row_sum[i] / kappa;
  }
  return q;
}

GridDistribution fixed_point(const SquareMatrix& positive_regrets) {
  const int n = positive_regrets.size();
  const SquareMatrix q = transition_matrix(positive_regrets);

  GridDistribution mu;
  mu.weights.assign(n, 1.0 / n);

  bool all_zero = true;
  for (double v : positive_regrets.data()) {
    if (v != 0.0) {
      all_zero = false;
      break;
    }
  }
  if (all_zero) return mu;

  // Iterate two decades below the advertised tolerance so callers measuring
  // the residual themselves still see margin.
  const double target = kFixedPointTolerance * 0.01;
  const long cap = 10L * n * n;
  std::vector<double> next(n);
  for (long iter = 0; iter < cap; ++iter) {
    double worst = 0.0;
    for (int j = 0; j < n; ++j) {
      double flow = 0.0;
      for (int i = 0; i < n; ++i) flow += mu.weights[i] * q.at(i, j);
      next[j] = flow;
      worst = std::max(worst, std::abs(flow - mu.weights[j]));
    }
    if (worst <= target) return mu;
    // Damped step keeps periodic transition structures from oscillating.
    for (int j = 0; j < n; ++j) mu.weights[j] = 0.5 * (mu.weights[j] + next[j]);
    normalize(mu.weights);
  }
  return stationary_fallback(q, mu);
}

OnlineCalibrator::OnlineCalibrator(int grid_n, std::uint64_t rng_key)
    : grid_n_(grid_n),
      rng_key_(rng_key),
      regret_(grid_n + 1),
      counts_(grid_n + 1, 0),
      outcome_sums_(grid_n + 1, 0) {
  if (grid_n < 1) throw std::domain_error("grid_n must be at least 1");
}

const CalibratorPrediction& OnlineCalibrator::predict() {
  if (pending_) return *pending_;
  const int n = grid_n_ + 1;
  SquareMatrix positive(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) positive.at(i, j) = std::max(regret_.at(i, j), 0.0);
    }
  }
  GridDistribution mu = fixed_point(positive);
  const double u = CounterRng(rng_key_).unit_at(static_cast<std::uint64_t>(steps_));
  const int index = mu.sample(u);
  pending_ = CalibratorPrediction{std::move(mu), index};
  return *pending_;
}

const CalibratorPrediction& OnlineCalibrator::pending_prediction() const {
  if (!pending_) throw protocol_error("no prediction is pending");
  return *pending_;
}

void OnlineCalibrator::update(const GridDistribution& distribution, int sampled_index, int y) {
  if (y != 0 && y != 1) throw std::domain_error("outcome must be 0 or 1");
  if (!pending_ || pending_->index != sampled_index ||
      pending_->distribution != distribution) {
    throw protocol_error("update does not match the pending prediction");
  }
  const int n = grid_n_ + 1;
  std::vector<double> level_loss(n);
  for (int i = 0; i < n; ++i) {
    const double d = y - grid_value(i);
    level_loss[i] = d * d;
  }
  for (int i = 0; i < n; ++i) {
    const double w = distribution.weights[i];
    if (w == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      regret_.at(i, j) += w * (level_loss[i] - level_loss[j]);
    }
  }
  counts_[sampled_index] += 1;
  outcome_sums_[sampled_index] += y;
  steps_ += 1;
  pending_.reset();
}

double OnlineCalibrator::calibration_error(int norm_p) const {
  if (norm_p != 1 && norm_p != 2) throw std::domain_error("norm_p must be 1 or 2");
  if (steps_ < 1) throw std::logic_error("calibration_error on an empty state");
  double total = 0.0;
  for (int i = 0; i <= grid_n_; ++i) {
    if (counts_[i] == 0) continue;
    const double rho = static_cast<double>(outcome_sums_[i]) / static_cast<double>(counts_[i]);
    const double d = std::abs(rho - grid_value(i));
    const double w = static_cast<double>(counts_[i]) / static_cast<double>(steps_);
    total += (norm_p == 1 ? d : d * d) * w;
  }
  return total;
}

nlohmann::json OnlineCalibrator::to_json() const {
  nlohmann::json doc{
      {"version", 1},
      {"grid_n", grid_n_},
      {"rng_key", rng_key_},
      {"steps", steps_},
      {"regret", regret_.data()},
      {"counts", counts_},
      {"outcome_sums", outcome_sums_},
  };
  if (pending_) {
    doc["pending"] = {{"index", pending_->index}, {"weights", pending_->distribution.weights}};
  } else {
    doc["pending"] = nullptr;
  }
  return doc;
}

OnlineCalibrator OnlineCalibrator::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("version", 0) != 1) {
    throw data_error("unsupported calibrator snapshot");
  }
  const int grid_n = doc.at("grid_n").get<int>();
  OnlineCalibrator state(grid_n, doc.at("rng_key").get<std::uint64_t>());
  state.steps_ = doc.at("steps").get<std::int64_t>();
  const auto regret = doc.at("regret").get<std::vector<double>>();
  const std::size_t n = static_cast<std::size_t>(grid_n) + 1;
  if (regret.size() != n * n) throw data_error("calibrator snapshot has a malformed regret table");
  state.regret_.data() = regret;
  state.counts_ = doc.at("counts").get<std::vector<std::int64_t>>();
  state.outcome_sums_ = doc.at("outcome_sums").get<std::vector<std::int64_t>>();
  if (state.counts_.size() != n || state.outcome_sums_.size() != n) {
    throw data_error("calibrator snapshot has malformed counts");
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (state.counts_[i] < 0 || state.outcome_sums_[i] < 0 ||
        state.outcome_sums_[i] > state.counts_[i]) {
      throw data_error("calibrator snapshot violates count invariants");
    }
    total += state.counts_[i];
  }
  if (total != state.steps_) throw data_error("calibrator snapshot violates count invariants");
  if (!doc.at("pending").is_null()) {
    CalibratorPrediction pending;
    pending.index = doc.at("pending").at("index").get<int>();
    pending.distribution.weights = doc.at("pending").at("weights").get<std::vector<double>>();
    if (pending.distribution.weights.size() != n || pending.index < 0 ||
        pending.index > grid_n) {
      throw data_error("calibrator snapshot has a malformed pending prediction");
    }
    state.pending_ = std::move(pending);
  }
  return state;
}

}  // namespace recal
