#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "recal/losses.hpp"

using recal::eval_loss;
using recal::expected_loss;
using recal::is_proper_on_grid;
using recal::LossId;
using recal::LossSpec;

TEST_CASE("squared loss value") {
  CHECK(eval_loss(LossSpec::make(LossId::l2), 1, 0.7) == doctest::Approx(0.09));
}

TEST_CASE("absolute loss on one period of the 001 pattern at one third") {
  const LossSpec l1 = LossSpec::make(LossId::l1);
  const int period[3] = {0, 0, 1};
  double total = 0.0;
  for (int y : period) total += eval_loss(l1, y, 1.0 / 3.0);
  CHECK(total / 3.0 == doctest::Approx(4.0 / 9.0));
}

TEST_CASE("log loss clamps extreme predictions") {
  const LossSpec log_spec = LossSpec::make(LossId::log_loss);
  CHECK(eval_loss(log_spec, 1, 0.0) == doctest::Approx(13.815510557964274));
  CHECK(eval_loss(log_spec, 0, 1.0) == doctest::Approx(13.815510557964274));
  CHECK(eval_loss(log_spec, 1, 1.0) == doctest::Approx(-std::log(1.0 - 1e-6)));
}

TEST_CASE("expected loss closed forms") {
  CHECK(expected_loss(LossSpec::make(LossId::l2), 0.5, 0.5) == doctest::Approx(0.25));
  CHECK(expected_loss(LossSpec::make(LossId::l1), 1.0 / 3.0, 1.0 / 3.0) ==
        doctest::Approx(4.0 / 9.0));
  const LossSpec l2 = LossSpec::make(LossId::l2);
  CHECK(expected_loss(l2, 0.3, 0.3) == doctest::Approx(0.21));
  CHECK(expected_loss(l2, 0.3, 0.7) == doctest::Approx(0.37));
  CHECK(expected_loss(l2, 0.3, 0.3) < expected_loss(l2, 0.3, 0.7));
}

TEST_CASE("expected loss matches independent summation") {
  for (LossId id : {LossId::l2, LossId::log_loss, LossId::misclass, LossId::l1, LossId::hinge}) {
    const LossSpec spec = LossSpec::make(id);
    for (int pi = 0; pi <= 10; ++pi) {
      for (int qi = 0; qi <= 10; ++qi) {
        const double p = pi / 10.0, q = qi / 10.0;
        const double by_hand = (1.0 - p) * eval_loss(spec, 0, q) + p * eval_loss(spec, 1, q);
        CHECK(expected_loss(spec, p, q) == doctest::Approx(by_hand).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("properness classification on the grid") {
  CHECK(is_proper_on_grid(LossSpec::make(LossId::l2), 100, 1e-12));
  CHECK(is_proper_on_grid(LossSpec::make(LossId::log_loss), 100, 1e-9));
  CHECK(is_proper_on_grid(LossSpec::make(LossId::misclass), 100, 1e-12));
  CHECK_FALSE(is_proper_on_grid(LossSpec::make(LossId::l1), 100, 1e-9));
  CHECK_FALSE(is_proper_on_grid(LossSpec::make(LossId::hinge), 100, 1e-9));
}

TEST_CASE("losses stay within their stated bound") {
  for (LossId id : {LossId::l2, LossId::log_loss, LossId::misclass, LossId::l1, LossId::hinge}) {
    const LossSpec spec = LossSpec::make(id);
    for (int i = 0; i <= 1000; ++i) {
      const double p = i / 1000.0;
      for (int y : {0, 1}) {
        const double v = eval_loss(spec, y, p);
        CHECK(v >= 0.0);
        CHECK(v <= spec.bound_b + 1e-12);
      }
    }
  }
}

TEST_CASE("misclassification ties at one half predict class one") {
  const LossSpec mc = LossSpec::make(LossId::misclass);
  CHECK(eval_loss(mc, 1, 0.5) == 0.0);
  CHECK(eval_loss(mc, 0, 0.5) == 1.0);
}

TEST_CASE("domain errors") {
  const LossSpec l2 = LossSpec::make(LossId::l2);
  CHECK_THROWS_AS(eval_loss(l2, 1, -0.1), std::domain_error);
  CHECK_THROWS_AS(eval_loss(l2, 1, 1.1), std::domain_error);
  CHECK_THROWS_AS(eval_loss(l2, 2, 0.5), std::domain_error);
  CHECK_THROWS_AS(expected_loss(l2, -0.2, 0.5), std::domain_error);
}

TEST_CASE("loss names round trip") {
  for (const char* name : {"l2", "log", "misclass", "l1", "hinge"}) {
    CHECK(recal::loss_name(recal::loss_from_name(name)) == name);
  }
  CHECK_THROWS_AS(recal::loss_from_name("brier"), std::invalid_argument);
}

TEST_CASE("hinge spans scores beyond the unit bound of the others") {
  const LossSpec hinge = LossSpec::make(LossId::hinge);
  CHECK(hinge.bound_b == doctest::Approx(2.0));
  CHECK(eval_loss(hinge, 1, 0.0) == doctest::Approx(2.0));
  CHECK(eval_loss(hinge, 1, 1.0) == doctest::Approx(0.0));
}
