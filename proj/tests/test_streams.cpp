#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "recal/errors.hpp"
#include "recal/forecasters.hpp"
#include "recal/streams.hpp"

using recal::adversarial_outcome;
using recal::bernoulli_stream;
using recal::data_error;
using recal::logistic_synth_stream;
using recal::pattern_stream;
using recal::read_csv;
using recal::StreamRecord;
using recal::write_csv;

namespace {

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

struct TempFile {
  std::string path;
  explicit TempFile(std::string p) : path(std::move(p)) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("degenerate Bernoulli streams are constant") {
  for (int y : bernoulli_stream(0.0, 100, 1)) CHECK(y == 0);
  for (int y : bernoulli_stream(1.0, 100, 1)) CHECK(y == 1);
  CHECK_THROWS_AS(bernoulli_stream(1.5, 10, 1), std::domain_error);
  CHECK_THROWS_AS(bernoulli_stream(0.5, 0, 1), std::domain_error);
}

TEST_CASE("fair Bernoulli streams concentrate near one half") {
  const std::vector<int> ys = bernoulli_stream(0.5, 100000, 9);
  double sum = 0;
  for (int y : ys) sum += y;
  CHECK(sum / 100000 >= 0.49);
  CHECK(sum / 100000 <= 0.51);
  CHECK(bernoulli_stream(0.5, 1000, 9) == std::vector<int>(ys.begin(), ys.begin() + 1000));
}

TEST_CASE("streams from different seeds are uncorrelated") {
  const std::vector<int> a = bernoulli_stream(0.5, 10000, 1);
  const std::vector<int> b = bernoulli_stream(0.5, 10000, 2);
  CHECK(a != b);
  double mean_a = 0, mean_b = 0;
  for (int i = 0; i < 10000; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= 10000;
  mean_b /= 10000;
  double cov = 0, var_a = 0, var_b = 0;
  for (int i = 0; i < 10000; ++i) {
    cov += (a[i] - mean_a) * (b[i] - mean_b);
    var_a += (a[i] - mean_a) * (a[i] - mean_a);
    var_b += (b[i] - mean_b) * (b[i] - mean_b);
  }
  CHECK(std::abs(cov / std::sqrt(var_a * var_b)) <= 0.05);
}

TEST_CASE("patterns cycle to the requested length") {
  CHECK(pattern_stream("001", 6) == std::vector<int>{0, 0, 1, 0, 0, 1});
  CHECK(pattern_stream("01", 4) == std::vector<int>{0, 1, 0, 1});
  CHECK(pattern_stream("1", 3) == std::vector<int>{1, 1, 1});
  CHECK(pattern_stream("001", 4) == std::vector<int>{0, 0, 1, 0});
  CHECK_THROWS_AS(pattern_stream("", 3), std::domain_error);
  CHECK_THROWS_AS(pattern_stream("012", 3), std::domain_error);
  CHECK_THROWS_AS(pattern_stream(std::vector<int>{0, 2}, 3), std::domain_error);
}

TEST_CASE("the adversary bets against confident predictions") {
  CHECK(adversarial_outcome(0.7) == 0);
  CHECK(adversarial_outcome(0.3) == 1);
  CHECK(adversarial_outcome(0.5) == 1);
  CHECK(adversarial_outcome(1.0) == 0);
  CHECK(adversarial_outcome(0.0) == 1);
}

TEST_CASE("synthetic logistic outcomes follow the weights") {
  const auto zero_w = logistic_synth_stream({0.0, 0.0}, 100000, 5);
  double mean = 0;
  for (const auto& r : zero_w) mean += r.y;
  mean /= 100000;
  CHECK(mean >= 0.49);
  CHECK(mean <= 0.51);
  CHECK(logistic_synth_stream({0.0, 0.0}, 100, 5) ==
        std::vector<StreamRecord>(zero_w.begin(), zero_w.begin() + 100));

  const auto strong = logistic_synth_stream({12.0, 16.0}, 100000, 6);
  int disagreements = 0;
  for (const auto& r : strong) {
    const double score = 12.0 * r.x[0] + 16.0 * r.x[1];
    if ((recal::logistic(score) >= 0.5 ? 1 : 0) != r.y) disagreements += 1;
  }
  CHECK(double(disagreements) / 100000 <= 0.05);
  CHECK_THROWS_AS(logistic_synth_stream({}, 10, 1), std::domain_error);
}

TEST_CASE("csv rows parse into records") {
  TempFile f("test_read_tmp.csv");
  write_text(f.path, "p_f,y\n0.7,1\n0.3,0\n");
  const auto records = read_csv(f.path);
  REQUIRE(records.size() == 2);
  CHECK(records[0].p_f == 0.7);
  CHECK(records[0].y == 1);
  CHECK(records[0].x.empty());
  CHECK(records[1].p_f == 0.3);
  CHECK(records[1].y == 0);
}

TEST_CASE("feature columns parse in index order regardless of header order") {
  TempFile f("test_read_x_tmp.csv");
  write_text(f.path, "x0,x1,y\n1.0,-2.0,0\n");
  const auto records = read_csv(f.path);
  REQUIRE(records.size() == 1);
  CHECK(records[0].x == std::vector<double>{1.0, -2.0});
  CHECK_FALSE(records[0].p_f.has_value());

  TempFile g("test_read_x2_tmp.csv");
  write_text(g.path, "x1,y,x0\n5.0,1,4.0\n");
  const auto reordered = read_csv(g.path);
  CHECK(reordered[0].x == std::vector<double>{4.0, 5.0});
}

TEST_CASE("csv validation errors carry row and column context") {
  TempFile f("test_read_bad_tmp.csv");

  write_text(f.path, "p_f,y\n1.3,1\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("row 1"), data_error);

  write_text(f.path, "p_f,y\n0.5,1\nabc,0\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("row 2"), data_error);

  write_text(f.path, "p_f,y\n0.5,1\n0.25\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("row 2"), data_error);

  write_text(f.path, "p_f\n0.5\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("missing y"), data_error);

  write_text(f.path, "y\n1\n");
  CHECK_THROWS_AS(read_csv(f.path), data_error);

  write_text(f.path, "p_f,label\n0.5,1\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("label"), data_error);

  write_text(f.path, "x1,y\n0.5,1\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("x0"), data_error);

  write_text(f.path, "p_f,y\n0.5,2\n");
  CHECK_THROWS_WITH_AS(read_csv(f.path), doctest::Contains("column y"), data_error);

  CHECK_THROWS_AS(read_csv("does_not_exist_tmp.csv"), data_error);
}

TEST_CASE("records survive a write/read round trip exactly") {
  TempFile f("test_roundtrip_tmp.csv");
  std::vector<StreamRecord> records;
  for (int i = 0; i < 50; ++i) {
    StreamRecord r;
    r.x = {i * 0.1234567890123456789, -i * 3.14159e-7, double(i)};
    r.p_f = (i % 101) / 100.0;
    r.y = i % 2;
    records.push_back(r);
  }
  write_csv(f.path, records);
  CHECK(read_csv(f.path) == records);

  std::ifstream in(f.path, std::ios::binary);
  std::string header;
  std::getline(in, header);
  CHECK(header == "x0,x1,x2,p_f,y");
}

TEST_CASE("outcome-only records cannot be written") {
  std::vector<StreamRecord> records(1);
  records[0].y = 1;
  CHECK_THROWS_AS(write_csv("test_bad_write_tmp.csv", records), data_error);
  CHECK_THROWS_AS(write_csv("test_bad_write_tmp.csv", {}), data_error);
}
