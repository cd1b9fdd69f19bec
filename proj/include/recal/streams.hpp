#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace recal {

// One event: optional feature vector, optional raw forecast, binary outcome.
struct StreamRecord {
  std::vector<double> x;
  std::optional<double> p_f;
  int y = 0;

  bool operator==(const StreamRecord&) const = default;
};

std::vector<int> bernoulli_stream(double p, std::int64_t t, std::uint64_t seed);

std::vector<int> pattern_stream(const std::vector<int>& pattern, std::int64_t t);
std::vector<int> pattern_stream(std::string_view pattern, std::int64_t t);

// Adaptive adversary: picks the outcome the current prediction least
// expects. Call only after the prediction for this step is fixed.
int adversarial_outcome(double p_t);

// Standard-normal feature vectors with y ~ Ber(logistic(w_true . x)).
std::vector<StreamRecord> logistic_synth_stream(const std::vector<double>& w_true, std::int64_t t,
                                                std::uint64_t seed);

// CSV with header naming columns from {y, p_f, x0..xk}; y is required and at
// least one of p_f / features must be present. Errors carry 1-based data-row
// and column context.
std::vector<StreamRecord> read_csv(const std::string& path);
void write_csv(const std::string& path, const std::vector<StreamRecord>& records);

}  // namespace recal
