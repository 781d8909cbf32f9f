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

#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "sdnddos/errors.hpp"

namespace sdnddos::metrics {

// counts[predicted][actual]: rows are predictions, columns ground truth.
class ConfusionMatrix {
 public:
  ConfusionMatrix() = default;
  explicit ConfusionMatrix(std::size_t n, std::vector<std::string> class_names = {})
      : n_(n), counts_(n * n, 0), names_(std::move(class_names)) {
    if (names_.empty()) {
      for (std::size_t i = 0; i < n; ++i) names_.push_back(std::to_string(i));
    }
    if (names_.size() != n) throw ValidationError("class name count does not match matrix size");
  }

  std::size_t size() const { return n_; }
  const std::vector<std::string>& class_names() const { return names_; }

  std::uint64_t at(std::size_t predicted, std::size_t actual) const {
    return counts_.at(predicted * n_ + actual);
  }
  void add(std::size_t predicted, std::size_t actual) {
    if (predicted >= n_ || actual >= n_) throw ValidationError("class id out of range");
    ++counts_[predicted * n_ + actual];
  }

  std::uint64_t total() const {
    return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
  }
  std::uint64_t trace() const {
    std::uint64_t t = 0;
    for (std::size_t i = 0; i < n_; ++i) t += at(i, i);
    return t;
  }
  std::uint64_t row_sum(std::size_t predicted) const {
    std::uint64_t s = 0;
    for (std::size_t a = 0; a < n_; ++a) s += at(predicted, a);
    return s;
  }
  std::uint64_t column_sum(std::size_t actual) const {
    std::uint64_t s = 0;
    for (std::size_t p = 0; p < n_; ++p) s += at(p, actual);
    return s;
  }

  friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> counts_;
  std::vector<std::string> names_;
};

inline ConfusionMatrix build_confusion(std::span<const int> predicted, std::span<const int> actual,
                                       std::size_t n, std::vector<std::string> class_names = {}) {
  if (predicted.size() != actual.size()) {
    throw ValidationError("predicted and actual lists differ in length");
  }
  ConfusionMatrix m(n, std::move(class_names));
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    if (predicted[i] < 0 || actual[i] < 0) throw ValidationError("negative class id");
    m.add(static_cast<std::size_t>(predicted[i]), static_cast<std::size_t>(actual[i]));
  }
  return m;
}

// Percentage of correctly classified records.
inline double accuracy(const ConfusionMatrix& m) {
  const auto total = m.total();
  if (total == 0) throw ValidationError("accuracy of an empty confusion matrix");
  return 100.0 * static_cast<double>(m.trace()) / static_cast<double>(total);
}

struct ClassScores {
  double precision = 0.0;  // percent
  double recall = 0.0;
  double f_measure = 0.0;
};

// Per-class precision (over the prediction row), recall (over the actual
// column) and their harmonic mean, in percent. Zero denominators give 0.
inline std::vector<ClassScores> precision_recall_f(const ConfusionMatrix& m) {
  if (m.total() == 0) throw ValidationError("precision/recall of an empty confusion matrix");
  std::vector<ClassScores> out(m.size());
  for (std::size_t j = 0; j < m.size(); ++j) {
    const double tp = static_cast<double>(m.at(j, j));
    const double row = static_cast<double>(m.row_sum(j));
    const double col = static_cast<double>(m.column_sum(j));
    ClassScores& s = out[j];
    s.precision = row > 0 ? 100.0 * tp / row : 0.0;
    s.recall = col > 0 ? 100.0 * tp / col : 0.0;
    s.f_measure = s.precision + s.recall > 0
                      ? 2.0 * s.precision * s.recall / (s.precision + s.recall)
                      : 0.0;
  }
  return out;
}

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
  double threshold = 0.0;
};

struct RocCurve {
  std::vector<RocPoint> points;  // from (0,0) to (1,1), non-decreasing fpr
  double auc = 0.0;
};

// One-vs-rest ROC for class `positive` from that class's scores. Records with
// equal scores cross the threshold together, so ties produce diagonal steps.
inline RocCurve roc_curve(std::span<const double> scores, std::span<const int> actual,
                          int positive) {
  if (scores.size() != actual.size()) throw ValidationError("scores and labels differ in length");
  std::size_t positives = 0;
  for (int a : actual) positives += (a == positive);
  const std::size_t negatives = actual.size() - positives;
  if (positives == 0) {
    throw ValidationError("class " + std::to_string(positive) + " absent from ground truth");
  }
  if (negatives == 0) {
    throw ValidationError("class " + std::to_string(positive) + " has no negatives");
  }

  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0, std::numeric_limits<double>::infinity()});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < order.size();) {
    const double threshold = scores[order[i]];
    while (i < order.size() && scores[order[i]] == threshold) {
      (actual[order[i]] == positive ? tp : fp) += 1;
      ++i;
    }
    curve.points.push_back({static_cast<double>(fp) / static_cast<double>(negatives),
                            static_cast<double>(tp) / static_cast<double>(positives), threshold});
  }
  for (std::size_t k = 1; k < curve.points.size(); ++k) {
    const RocPoint& a = curve.points[k - 1];
    const RocPoint& b = curve.points[k];
    curve.auc += (b.fpr - a.fpr) * (a.tpr + b.tpr) / 2.0;
  }
  return curve;
}

}  // namespace sdnddos::metrics
