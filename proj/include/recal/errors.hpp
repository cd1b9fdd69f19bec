#pragma once

#include <stdexcept>
#include <string>

namespace recal {

// Predict/update (or forecast/outcome) calls arrived out of order.
class protocol_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A numeric routine failed to reach its tolerance; carries the residual.
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Malformed or out-of-range input data (CSV rows, exhausted streams).
class data_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace recal
