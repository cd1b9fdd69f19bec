#include "recal/streams.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "recal/errors.hpp"
#include "recal/forecasters.hpp"
#include "recal/metrics.hpp"
#include "recal/rng.hpp"

namespace recal {
namespace {

// Substream tags deriving generator keys from a user seed.
constexpr std::uint64_t kBernoulliTag = 0x42u;
constexpr std::uint64_t kSynthFeatureTag = 0x58u;
constexpr std::uint64_t kSynthOutcomeTag = 0x59u;

void check_t(std::int64_t t) {
  if (t < 1) throw std::domain_error("stream length must be positive");
}

}  // namespace

std::vector<int> bernoulli_stream(double p, std::int64_t t, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("probability must lie in [0,1]");
  check_t(t);
  CounterRng rng = CounterRng::derive(seed, kBernoulliTag);
  std::vector<int> ys(t);
  for (std::int64_t i = 0; i < t; ++i) ys[i] = rng.next_unit() < p ? 1 : 0;
  return ys;
}

std::vector<int> pattern_stream(const std::vector<int>& pattern, std::int64_t t) {
  if (pattern.empty()) throw std::domain_error("pattern must be nonempty");
  check_t(t);
  for (int b : pattern) {
    if (b != 0 && b != 1) throw std::domain_error("pattern entries must be 0 or 1");
  }
  std::vector<int> ys(t);
  for (std::int64_t i = 0; i < t; ++i) ys[i] = pattern[i % pattern.size()];
  return ys;
}

std::vector<int> pattern_stream(std::string_view pattern, std::int64_t t) {
  std::vector<int> bits;
  bits.reserve(pattern.size());
  for (char c : pattern) {
    if (c != '0' && c != '1') throw std::domain_error("pattern entries must be 0 or 1");
    bits.push_back(c - '0');
  }
  return pattern_stream(bits, t);
}

int adversarial_outcome(double p_t) { return p_t > 0.5 ? 0 : 1; }

std::vector<StreamRecord> logistic_synth_stream(const std::vector<double>& w_true, std::int64_t t,
                                                std::uint64_t seed) {
  if (w_true.empty()) throw std::domain_error("weight vector must be nonempty");
  check_t(t);
  CounterRng feature_rng = CounterRng::derive(seed, kSynthFeatureTag);
  CounterRng outcome_rng = CounterRng::derive(seed, kSynthOutcomeTag);
  std::vector<StreamRecord> records(t);
  const std::size_t dim = w_true.size();
  for (std::int64_t i = 0; i < t; ++i) {
    StreamRecord& r = records[i];
    r.x.resize(dim);
    for (std::size_t k = 0; k < dim; k += 2) {
      const auto [a, b] = feature_rng.next_normal_pair();
      r.x[k] = a;
      if (k + 1 < dim) r.x[k + 1] = b;
    }
    double score = 0.0;
    for (std::size_t k = 0; k < dim; ++k) score += w_true[k] * r.x[k];
    r.y = outcome_rng.next_unit() < logistic(score) ? 1 : 0;
  }
  return records;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double(const std::string& field, std::int64_t row, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc{} || res.ptr != end) {
    throw data_error("row " + std::to_string(row) + ", column " + column +
                     ": cannot parse number from '" + field + "'");
  }
  return value;
}

struct CsvLayout {
  int y_col = -1;
  int p_f_col = -1;
  std::vector<int> x_cols;  // x_cols[k] = column of feature k
};

CsvLayout parse_header(const std::string& line) {
  CsvLayout layout;
  const std::vector<std::string> names = split_line(line);
  std::vector<std::pair<int, int>> x_pairs;
  for (std::size_t c = 0; c < names.size(); ++c) {
    const std::string& name = names[c];
    if (name == "y") {
      if (layout.y_col >= 0) throw data_error("duplicate column y in header");
      layout.y_col = static_cast<int>(c);
    } else if (name == "p_f") {
      if (layout.p_f_col >= 0) throw data_error("duplicate column p_f in header");
      layout.p_f_col = static_cast<int>(c);
    } else if (name.size() > 1 && name[0] == 'x') {
      int k = -1;
      const char* begin = name.data() + 1;
      const char* end = name.data() + name.size();
      const auto res = std::from_chars(begin, end, k);
      if (res.ec != std::errc{} || res.ptr != end || k < 0) {
        throw data_error("unrecognized column '" + name + "' in header");
      }
      x_pairs.emplace_back(k, static_cast<int>(c));
    } else {
      throw data_error("unrecognized column '" + name + "' in header");
    }
  }
  if (layout.y_col < 0) throw data_error("missing y column in header");
  if (!x_pairs.empty()) {
    int max_k = 0;
    for (const auto& [k, c] : x_pairs) max_k = std::max(max_k, k);
    layout.x_cols.assign(max_k + 1, -1);
    for (const auto& [k, c] : x_pairs) {
      if (layout.x_cols[k] >= 0) {
        throw data_error("duplicate column x" + std::to_string(k) + " in header");
      }
      layout.x_cols[k] = c;
    }
    for (int k = 0; k <= max_k; ++k) {
      if (layout.x_cols[k] < 0) {
        throw data_error("feature columns must be contiguous: missing x" + std::to_string(k));
      }
    }
  }
  if (layout.p_f_col < 0 && layout.x_cols.empty()) {
    throw data_error("header must name p_f or feature columns besides y");
  }
  return layout;
}

}  // namespace

std::vector<StreamRecord> read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw data_error("cannot open input file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw data_error("empty input file: " + path);
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const CsvLayout layout = parse_header(line);
  const std::size_t expected_fields =
      1 + (layout.p_f_col >= 0 ? 1 : 0) + layout.x_cols.size();

  std::vector<StreamRecord> records;
  std::int64_t row = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    row += 1;
    if (line.empty()) {
      throw data_error("row " + std::to_string(row) + ": empty line");
    }
    const std::vector<std::string> fields = split_line(line);
    if (fields.size() != expected_fields) {
      throw data_error("row " + std::to_string(row) + ": expected " +
                       std::to_string(expected_fields) + " fields, found " +
                       std::to_string(fields.size()));
    }
    StreamRecord rec;
    const double y_val = parse_double(fields[layout.y_col], row, "y");
    if (y_val != 0.0 && y_val != 1.0) {
      throw data_error("row " + std::to_string(row) + ", column y: outcome must be 0 or 1");
    }
    rec.y = static_cast<int>(y_val);
    if (layout.p_f_col >= 0) {
      const double p = parse_double(fields[layout.p_f_col], row, "p_f");
      if (!(p >= 0.0 && p <= 1.0)) {
        throw data_error("row " + std::to_string(row) +
                         ", column p_f: forecast must lie in [0,1]");
      }
      rec.p_f = p;
    }
    rec.x.resize(layout.x_cols.size());
    for (std::size_t k = 0; k < layout.x_cols.size(); ++k) {
      rec.x[k] = parse_double(fields[layout.x_cols[k]], row, "x" + std::to_string(k));
    }
    records.push_back(std::move(rec));
  }
  return records;
}

void write_csv(const std::string& path, const std::vector<StreamRecord>& records) {
  if (records.empty()) throw data_error("no records to write");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw data_error("cannot open output file: " + path);
  const bool has_p_f = records.front().p_f.has_value();
  const std::size_t dim = records.front().x.size();
  if (!has_p_f && dim == 0) throw data_error("records must carry p_f or features");
  std::string header;
  for (std::size_t k = 0; k < dim; ++k) {
    header += "x" + std::to_string(k) + ",";
  }
  if (has_p_f) header += "p_f,";
  header += "y";
  out << header << '\n';
  for (std::size_t i = 0; i < records.size(); ++i) {
    const StreamRecord& rec = records[i];
    if (rec.x.size() != dim || rec.p_f.has_value() != has_p_f) {
      throw data_error("row " + std::to_string(i + 1) + ": record shape differs from the first row");
    }
    for (std::size_t k = 0; k < dim; ++k) out << format_double(rec.x[k]) << ',';
    if (has_p_f) out << format_double(*rec.p_f) << ',';
    out << rec.y << '\n';
  }
  if (!out) throw data_error("failed writing output file: " + path);
}

}  // namespace recal
