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

// Recount oracle for confusion-matrix statistics.

#pragma once

#include <cstdint>
#include <vector>

namespace sdnddos::testing {

struct RecountStats {
  std::vector<std::vector<std::uint64_t>> counts;  // [predicted][actual]
  double accuracy = 0;
  std::vector<double> precision, recall, f;
};

inline RecountStats recount(const std::vector<int>& predicted, const std::vector<int>& actual,
                            int classes) {
  RecountStats s;
  s.counts.assign(static_cast<std::size_t>(classes),
                  std::vector<std::uint64_t>(static_cast<std::size_t>(classes), 0));
  for (int p = 0; p < classes; ++p) {
    for (int a = 0; a < classes; ++a) {
      for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == p && actual[i] == a) ++s.counts[p][a];
      }
    }
  }
  std::uint64_t correct = 0;
  for (std::size_t i = 0; i < predicted.size(); ++i) correct += predicted[i] == actual[i];
  s.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(predicted.size());
  for (int j = 0; j < classes; ++j) {
    std::uint64_t tp = 0, as_j = 0, is_j = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
      tp += predicted[i] == j && actual[i] == j;
      as_j += predicted[i] == j;
      is_j += actual[i] == j;
    }
    const double P = as_j ? 100.0 * static_cast<double>(tp) / static_cast<double>(as_j) : 0.0;
    const double R = is_j ? 100.0 * static_cast<double>(tp) / static_cast<double>(is_j) : 0.0;
    s.precision.push_back(P);
    s.recall.push_back(R);
    s.f.push_back(P + R > 0 ? 2.0 * P * R / (P + R) : 0.0);
  }
  return s;
}

}  // namespace sdnddos::testing
