#pragma once

#include <string>
#include <string_view>

namespace recal {

enum class LossId { l2, log_loss, misclass, l1, hinge };

LossId loss_from_name(std::string_view name);
std::string_view loss_name(LossId id);

// A loss function descriptor. bound_b is the supremum of the loss over
// y in {0,1} and predictions in [0,1] (log loss is clamped so the bound
// stays finite).
struct LossSpec {
  LossId id = LossId::l2;
  double bound_b = 1.0;
  double log_clamp = 1e-6;

  static LossSpec make(LossId id, double log_clamp = 1e-6);
  static LossSpec make(std::string_view name, double log_clamp = 1e-6) {
    return make(loss_from_name(name), log_clamp);
  }
};

double eval_loss(const LossSpec& spec, int y, double p);

// p * loss(1, q) + (1 - p) * loss(0, q): expected loss of reporting q when
// outcomes are Bernoulli(p).
double expected_loss(const LossSpec& spec, double p, double q);

// Finite properness certificate: for every p on the grid {i/N}, reporting p
// itself must be within tol of the best grid report.
bool is_proper_on_grid(const LossSpec& spec, int grid_n, double tol);

}  // namespace recal
