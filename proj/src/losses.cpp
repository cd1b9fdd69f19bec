#include "recal/losses.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace recal {
namespace {

void check_probability(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::domain_error(std::string(what) + " must lie in [0, 1]");
  }
}

void check_outcome(int y) {
  if (y != 0 && y != 1) {
    throw std::domain_error("outcome must be 0 or 1");
  }
}

}  // namespace

LossId loss_from_name(std::string_view name) {
  if (name == "l2") return LossId::l2;
  if (name == "log") return LossId::log_loss;
  if (name == "misclass") return LossId::misclass;
  if (name == "l1") return LossId::l1;
  if (name == "hinge") return LossId::hinge;
  throw std::invalid_argument("unknown loss name: " + std::string(name));
}

std::string_view loss_name(LossId id) {
  switch (id) {
    case LossId::l2: return "l2";
    case LossId::log_loss: return "log";
    case LossId::misclass: return "misclass";
    case LossId::l1: return "l1";
    case LossId::hinge: return "hinge";
  }
  throw std::invalid_argument("unknown loss id");
}

LossSpec LossSpec::make(LossId id, double log_clamp) {
  if (!(log_clamp > 0.0 && log_clamp < 0.5)) {
    throw std::domain_error("log_clamp must lie in (0, 0.5)");
  }
  LossSpec spec;
  spec.id = id;
  spec.log_clamp = log_clamp;
  switch (id) {
    case LossId::l2:
    case LossId::l1:
    case LossId::misclass:
      spec.bound_b = 1.0;
      break;
    case LossId::hinge:
      // Worst case: score -1 against label +1.
      spec.bound_b = 2.0;
      break;
    case LossId::log_loss:
      spec.bound_b = -std::log(log_clamp);
      break;
  }
  return spec;
}

double eval_loss(const LossSpec& spec, int y, double p) {
  check_outcome(y);
  check_probability(p, "prediction");
  switch (spec.id) {
    case LossId::l2: {
      const double d = y - p;
      return d * d;
    }
    case LossId::log_loss: {
      const double q = std::clamp(p, spec.log_clamp, 1.0 - spec.log_clamp);
      return y == 1 ? -std::log(q) : -std::log(1.0 - q);
    }
    case LossId::misclass:
      return (p >= 0.5 ? 1 : 0) != y ? 1.0 : 0.0;
    case LossId::l1:
      return std::abs(y - p);
    case LossId::hinge: {
      const double score = 2.0 * p - 1.0;
      const double label = y == 1 ? 1.0 : -1.0;
      return std::max(0.0, 1.0 - label * score);
    }
  }
  throw std::invalid_argument("unknown loss id");
}

double expected_loss(const LossSpec& spec, double p, double q) {
  check_probability(p, "outcome probability");
  return p * eval_loss(spec, 1, q) + (1.0 - p) * eval_loss(spec, 0, q);
}

bool is_proper_on_grid(const LossSpec& spec, int grid_n, double tol) {
  if (grid_n < 2) throw std::domain_error("grid_n must be at least 2");
  if (!(tol > 0.0)) throw std::domain_error("tol must be positive");
  for (int i = 0; i <= grid_n; ++i) {
    const double p = static_cast<double>(i) / grid_n;
    const double truthful = expected_loss(spec, p, p);
    double best = truthful;
    for (int j = 0; j <= grid_n; ++j) {
      best = std::min(best, expected_loss(spec, p, static_cast<double>(j) / grid_n));
    }
    if (truthful > best + tol) return false;
  }
  return true;
}

}  // namespace recal
