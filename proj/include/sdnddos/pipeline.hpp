/*
 * Copyright 2026 The sdnddos Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// End-to-end orchestration: trace replay through the simulated switch and
// collector, per-interval feature extraction, min-max normalisation, model
// training (stacked autoencoder plus the soft-max and plain-network
// baselines) and evaluation.

#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sdnddos/errors.hpp"
#include "sdnddos/features.hpp"
#include "sdnddos/labels.hpp"
#include "sdnddos/metrics.hpp"
#include "sdnddos/sae.hpp"
#include "sdnddos/tcfi.hpp"
#include "sdnddos/trafficgen.hpp"

namespace sdnddos {

struct LabeledRecord {
  FeatureVector features;
  int label = 0;  // TrafficClass id

  friend bool operator==(const LabeledRecord&, const LabeledRecord&) = default;
};

struct ReplayStats {
  std::size_t packets = 0;
  std::size_t intervals = 0;
  std::uint64_t rule_pairs_installed = 0;
  std::size_t pending_flows_at_end = 0;
};

// Feeds the trace through switch and controller, snapshotting the collector
// at every interval boundary. Returns one vector per (host, interval) with
// incoming traffic, in time then host order.
inline std::vector<FeatureVector> replay(std::span<const PacketHeader> trace,
                                         double interval = kDefaultInterval,
                                         const Topology& topology = {},
                                         ReplayStats* stats = nullptr) {
  if (!(interval > 0.0)) throw ValidationError("interval must be positive");
  for (std::size_t i = 1; i < trace.size(); ++i) {
    if (trace[i].timestamp < trace[i - 1].timestamp) {
      throw ValidationError("trace is not time-sorted at packet " + std::to_string(i + 1));
    }
  }
  ReactiveController controller(topology);
  std::vector<FeatureVector> out;
  std::size_t intervals = 0;
  auto flush = [&](std::int64_t index) {
    const std::vector<PacketHeader> snapshot = controller.snapshot_and_reset();
    if (snapshot.empty()) return;
    ++intervals;
    auto vectors = extract_interval(snapshot, static_cast<double>(index) * interval);
    out.insert(out.end(), vectors.begin(), vectors.end());
  };

  std::int64_t current = 0;
  bool started = false;
  for (const PacketHeader& pkt : trace) {
    const auto index = static_cast<std::int64_t>(std::floor(pkt.timestamp / interval));
    if (!started) {
      current = index;
      started = true;
    }
    if (index != current) {
      flush(current);
      controller.switch_state().clear_egress_log();
      current = index;
    }
    controller.ingest(pkt, pkt.timestamp);
  }
  if (started) flush(current);

  if (stats) {
    stats->packets = trace.size();
    stats->intervals = intervals;
    stats->rule_pairs_installed = controller.pairs_installed();
    stats->pending_flows_at_end = controller.tcfi().pending_count();
  }
  return out;
}

// Attaches ground-truth labels by (host, interval start). Any vector without
// a label is an error; all of them are listed.
inline std::vector<LabeledRecord> join_labels(std::span<const FeatureVector> vectors,
                                              const GroundTruth& truth) {
  std::vector<LabeledRecord> out;
  out.reserve(vectors.size());
  std::string missing;
  std::size_t missing_count = 0;
  for (const FeatureVector& fv : vectors) {
    auto it = truth.find({fv.host, fv.interval_start});
    if (it == truth.end()) {
      if (++missing_count <= 20) {
        missing += "\n  no label for host " + fv.host.to_string() + " interval " +
                   std::to_string(fv.interval_start);
      }
      continue;
    }
    out.push_back({fv, static_cast<int>(it->second)});
  }
  if (missing_count > 0) {
    throw ValidationError(std::to_string(missing_count) + " host-interval(s) without label" +
                          missing);
  }
  return out;
}

// ---------------------------------------------------------------- normalisation

struct NormalizationParams {
  std::array<double, kFeatureCount> min{};
  std::array<double, kFeatureCount> max{};

  friend bool operator==(const NormalizationParams&, const NormalizationParams&) = default;
};

// Number of times parameters were fitted from data; tests use it to show
// that evaluation never refits on test records.
inline std::atomic<std::size_t> normalization_fit_count{0};

inline NormalizationParams fit_normalization(std::span<const LabeledRecord> records) {
  ++normalization_fit_count;
  NormalizationParams p;
  p.min.fill(0.0);
  p.max.fill(0.0);
  if (records.empty()) return p;
  p.min = records.front().features.values;
  p.max = records.front().features.values;
  for (const LabeledRecord& r : records) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      p.min[f] = std::min(p.min[f], r.features.values[f]);
      p.max[f] = std::max(p.max[f], r.features.values[f]);
    }
  }
  return p;
}

// (x - min) / (max - min); constant features map to 0. With `clamp` the
// result is limited to [0, 1] for values outside the fitted range.
inline FeatureVector apply_normalization(const FeatureVector& fv, const NormalizationParams& p,
                                         bool clamp) {
  FeatureVector out = fv;
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    const double span = p.max[f] - p.min[f];
    double v = span > 0.0 ? (fv.values[f] - p.min[f]) / span : 0.0;
    if (clamp) v = std::clamp(v, 0.0, 1.0);
    out.values[f] = v;
  }
  return out;
}

struct Normalized {
  std::vector<LabeledRecord> records;
  NormalizationParams params;
};

// Training mode (no params): fit on `records` and map them. Test mode: apply
// the given params with clamping.
inline Normalized normalize(std::span<const LabeledRecord> records,
                            const std::optional<NormalizationParams>& params) {
  Normalized out;
  const bool training = !params.has_value();
  out.params = training ? fit_normalization(records) : *params;
  out.records.reserve(records.size());
  for (const LabeledRecord& r : records) {
    out.records.push_back({apply_normalization(r.features, out.params, !training), r.label});
  }
  return out;
}

// ---------------------------------------------------------------- matrices

inline sae::Matrix feature_matrix(std::span<const LabeledRecord> records) {
  sae::Matrix X(static_cast<Eigen::Index>(kFeatureCount), static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      X(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i)) = records[i].features.values[f];
    }
  }
  return X;
}

inline std::vector<int> label_vector(std::span<const LabeledRecord> records, bool binary = false) {
  std::vector<int> y;
  y.reserve(records.size());
  for (const LabeledRecord& r : records) y.push_back(binary ? collapse_to_binary(r.label) : r.label);
  return y;
}

// ---------------------------------------------------------------- training

struct TrainedModels {
  sae::SaeModel sae;
  sae::SaeModel nn;
  sae::SaeModel softmax;
  sae::TrainingLog sae_log;
};

// The three comparison models, sharing seed and epoch budget. Records must
// already be normalised.
inline TrainedModels train_all(std::span<const LabeledRecord> train, const sae::Hyperparams& h) {
  const sae::Matrix X = feature_matrix(train);
  const std::vector<int> y = label_vector(train, h.num_classes == 2);
  const auto names = h.num_classes == 2 ? two_class_names() : eight_class_names();
  if (h.num_classes != 2 && h.num_classes != kNumClasses) {
    throw ValidationError("number of classes must be 8 or 2");
  }
  TrainedModels out;
  out.sae = sae::train_sae(X, y, h, names, &out.sae_log);
  out.nn = sae::train_plain_network(X, y, h, names);
  out.softmax = sae::train_softmax_only(X, y, h, names);
  return out;
}

// ---------------------------------------------------------------- evaluation

enum class EvalMode { kEightClass, kTwoClass };

struct EvaluationReport {
  EvalMode mode = EvalMode::kEightClass;
  std::vector<std::string> class_names;
  metrics::ConfusionMatrix confusion;
  double accuracy = 0.0;
  std::vector<metrics::ClassScores> scores;
  std::vector<std::optional<metrics::RocCurve>> roc;  // empty when the class is absent
  std::vector<int> predicted;
  std::vector<int> actual;
};

// Scores test records that were normalised with the training parameters.
inline EvaluationReport evaluate(const sae::SaeModel& model, std::span<const LabeledRecord> test,
                                 EvalMode mode) {
  if (test.empty()) throw ValidationError("empty test set");
  const bool binary_model = model.num_classes() == 2;
  if (binary_model && mode == EvalMode::kEightClass) {
    throw ValidationError("a two-class model cannot be evaluated in 8-class mode");
  }
  if (!binary_model && model.num_classes() != kNumClasses) {
    throw ValidationError("model has " + std::to_string(model.num_classes()) +
                          " classes; expected 8 or 2");
  }
  const sae::Matrix P = sae::predict_proba(model, feature_matrix(test));

  EvaluationReport report;
  report.mode = mode;
  const bool two = mode == EvalMode::kTwoClass;
  report.class_names = two ? two_class_names() : eight_class_names();
  const std::size_t K = report.class_names.size();

  sae::Matrix scores(static_cast<Eigen::Index>(K), P.cols());
  if (two && !binary_model) {
    scores.row(0) = P.row(0);
    scores.row(1) = (1.0 - P.row(0).array()).matrix();
  } else {
    scores = P;
  }
  std::vector<int> argmax = sae::argmax_columns(P);
  for (std::size_t i = 0; i < test.size(); ++i) {
    int pred = argmax[i];
    if (two && !binary_model) pred = collapse_to_binary(pred);
    report.predicted.push_back(pred);
    report.actual.push_back(two ? collapse_to_binary(test[i].label) : test[i].label);
  }
  for (int a : report.actual) {
    if (a < 0 || static_cast<std::size_t>(a) >= K) {
      throw ValidationError("test label " + std::to_string(a) + " is not a model class");
    }
  }
  report.confusion = metrics::build_confusion(report.predicted, report.actual, K, report.class_names);
  report.accuracy = metrics::accuracy(report.confusion);
  report.scores = metrics::precision_recall_f(report.confusion);

  for (std::size_t k = 0; k < K; ++k) {
    const bool present = std::count(report.actual.begin(), report.actual.end(), int(k)) > 0;
    const bool has_negatives =
        std::count(report.actual.begin(), report.actual.end(), int(k)) <
        static_cast<std::ptrdiff_t>(report.actual.size());
    if (!present || !has_negatives) {
      report.roc.emplace_back(std::nullopt);
      continue;
    }
    std::vector<double> s(static_cast<std::size_t>(scores.cols()));
    for (Eigen::Index i = 0; i < scores.cols(); ++i) {
      s[static_cast<std::size_t>(i)] = scores(static_cast<Eigen::Index>(k), i);
    }
    report.roc.emplace_back(metrics::roc_curve(s, report.actual, static_cast<int>(k)));
  }
  return report;
}

// ---------------------------------------------------------------- experiment

struct ExperimentResult {
  std::size_t train_records = 0;
  std::size_t test_records = 0;
  std::array<std::size_t, kNumClasses> train_per_class{};
  std::array<std::size_t, kNumClasses> test_per_class{};
  TrainedModels models;
  NormalizationParams normalization;
  EvaluationReport sae_eight;
  EvaluationReport sae_two;
  double softmax_accuracy = 0.0;
  double nn_accuracy = 0.0;
  double seconds_generate_extract = 0.0;
  double seconds_train = 0.0;
  double seconds_eval = 0.0;
};

inline std::vector<LabeledRecord> scenario_records(const ScenarioSpec& spec) {
  GeneratedTrace trace = generate(spec);
  return join_labels(replay(trace.packets, spec.interval), trace.labels);
}

// Generate, extract, train on `train_spec`, evaluate on `test_spec`.
inline ExperimentResult run_experiment(const ScenarioSpec& train_spec, const ScenarioSpec& test_spec,
                                       const sae::Hyperparams& h) {
  using Clock = std::chrono::steady_clock;
  auto seconds = [](Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
  };
  ExperimentResult r;
  auto t0 = Clock::now();
  const auto train_raw = scenario_records(train_spec);
  const auto test_raw = scenario_records(test_spec);
  auto t1 = Clock::now();

  Normalized train = normalize(train_raw, std::nullopt);
  Normalized test = normalize(test_raw, train.params);
  r.normalization = train.params;
  r.train_records = train.records.size();
  r.test_records = test.records.size();
  for (const auto& rec : train.records) ++r.train_per_class[static_cast<std::size_t>(rec.label)];
  for (const auto& rec : test.records) ++r.test_per_class[static_cast<std::size_t>(rec.label)];

  r.models = train_all(train.records, h);
  auto t2 = Clock::now();
  r.sae_eight = evaluate(r.models.sae, test.records, EvalMode::kEightClass);
  r.sae_two = evaluate(r.models.sae, test.records, EvalMode::kTwoClass);
  r.softmax_accuracy = evaluate(r.models.softmax, test.records, EvalMode::kEightClass).accuracy;
  r.nn_accuracy = evaluate(r.models.nn, test.records, EvalMode::kEightClass).accuracy;
  auto t3 = Clock::now();
  r.seconds_generate_extract = seconds(t0, t1);
  r.seconds_train = seconds(t1, t2);
  r.seconds_eval = seconds(t2, t3);
  return r;
}

}  // namespace sdnddos
