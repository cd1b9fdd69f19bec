#include "recal/recalibrator.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "recal/errors.hpp"
#include "recal/rng.hpp"

namespace recal {

int bucket_index(double p_f, int buckets_m) {
  if (buckets_m < 1) throw std::domain_error("bucket count must be positive");
  if (!(p_f >= 0.0 && p_f <= 1.0)) throw std::domain_error("forecast must lie in [0,1]");
  if (p_f >= 1.0) return buckets_m - 1;
  return static_cast<int>(p_f * buckets_m);
}

Recalibrator::Recalibrator(int buckets_m, int grid_n, std::uint64_t seed)
    : m_(buckets_m), n_(grid_n), seed_(seed), instances_(buckets_m), counts_(buckets_m, 0) {
  if (buckets_m < 1) throw std::domain_error("bucket count must be positive");
  if (grid_n < 1) throw std::domain_error("grid resolution must be positive");
}

OnlineCalibrator& Recalibrator::instance_for(int bucket) {
  auto& slot = instances_[bucket];
  if (!slot) {
    slot.emplace(n_, CounterRng::derive_key(seed_, static_cast<std::uint64_t>(bucket)));
  }
  return *slot;
}

double Recalibrator::observe_forecast(double p_f) {
  if (pending_bucket_) throw protocol_error("forecast observed while an outcome is pending");
  const int bucket = bucket_index(p_f, m_);
  OnlineCalibrator& inst = instance_for(bucket);
  const CalibratorPrediction& pred = inst.predict();
  pending_bucket_ = bucket;
  return inst.grid_value(pred.index);
}

void Recalibrator::observe_outcome(int y) {
  if (!pending_bucket_) throw protocol_error("outcome observed with no pending forecast");
  const int bucket = *pending_bucket_;
  OnlineCalibrator& inst = *instances_[bucket];
  const CalibratorPrediction pred = inst.pending_prediction();
  inst.update(pred.distribution, pred.index, y);
  counts_[bucket] += 1;
  steps_ += 1;
  pending_bucket_.reset();
}

int Recalibrator::pending_bucket() const {
  if (!pending_bucket_) throw protocol_error("no forecast is pending");
  return *pending_bucket_;
}

double Recalibrator::pending_mean() const {
  if (!pending_bucket_) throw protocol_error("no forecast is pending");
  return instances_[*pending_bucket_]->pending_prediction().distribution.mean_grid_value();
}

bool Recalibrator::instance_active(int bucket) const {
  if (bucket < 0 || bucket >= m_) throw std::domain_error("bucket index out of range");
  return instances_[bucket].has_value();
}

const OnlineCalibrator& Recalibrator::instance(int bucket) const {
  if (!instance_active(bucket)) throw std::logic_error("bucket has no instance yet");
  return *instances_[bucket];
}

nlohmann::json Recalibrator::to_json() const {
  nlohmann::json inst_doc = nlohmann::json::object();
  for (int j = 0; j < m_; ++j) {
    if (instances_[j]) inst_doc[std::to_string(j)] = instances_[j]->to_json();
  }
  nlohmann::json doc{
      {"version", 1},       {"buckets_m", m_},
      {"grid_n", n_},       {"seed", seed_},
      {"steps", steps_},    {"bucket_counts", counts_},
      {"instances", inst_doc},
  };
  if (pending_bucket_) {
    doc["pending_bucket"] = *pending_bucket_;
  } else {
    doc["pending_bucket"] = nullptr;
  }
  return doc;
}

Recalibrator Recalibrator::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || doc.value("version", 0) != 1) {
    throw data_error("unsupported recalibrator snapshot");
  }
  Recalibrator state(doc.at("buckets_m").get<int>(), doc.at("grid_n").get<int>(),
                     doc.at("seed").get<std::uint64_t>());
  state.steps_ = doc.at("steps").get<std::int64_t>();
  state.counts_ = doc.at("bucket_counts").get<std::vector<std::int64_t>>();
  if (state.counts_.size() != static_cast<std::size_t>(state.m_)) {
    throw data_error("recalibrator snapshot has malformed bucket counts");
  }
  std::int64_t total = 0;
  for (int j = 0; j < state.m_; ++j) {
    if (state.counts_[j] < 0) throw data_error("recalibrator snapshot has malformed bucket counts");
    total += state.counts_[j];
  }
  if (total != state.steps_) throw data_error("recalibrator snapshot violates count invariants");
  for (const auto& [key, value] : doc.at("instances").items()) {
    int bucket = -1;
    try {
      bucket = std::stoi(key);
    } catch (const std::exception&) {
      throw data_error("recalibrator snapshot has a malformed instance key");
    }
    if (bucket < 0 || bucket >= state.m_) {
      throw data_error("recalibrator snapshot has an out-of-range instance key");
    }
    OnlineCalibrator inst = OnlineCalibrator::from_json(value);
    if (inst.grid_n() != state.n_ || inst.steps() != state.counts_[bucket]) {
      throw data_error("recalibrator snapshot instance disagrees with bucket counts");
    }
    state.instances_[bucket] = std::move(inst);
  }
  for (int j = 0; j < state.m_; ++j) {
    if (state.counts_[j] > 0 && !state.instances_[j]) {
      throw data_error("recalibrator snapshot instance disagrees with bucket counts");
    }
  }
  if (!doc.at("pending_bucket").is_null()) {
    const int bucket = doc.at("pending_bucket").get<int>();
    if (bucket < 0 || bucket >= state.m_ || !state.instances_[bucket] ||
        !state.instances_[bucket]->has_pending()) {
      throw data_error("recalibrator snapshot has a malformed pending marker");
    }
    state.pending_bucket_ = bucket;
  }
  return state;
}

}  // namespace recal
