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

// Evaluation reports: CSV tables for external tools and a text summary.

#pragma once

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <string>

#include "sdnddos/csv_io.hpp"
#include "sdnddos/errors.hpp"
#include "sdnddos/pipeline.hpp"

namespace sdnddos::report {

inline std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

// Rows are predictions, columns ground truth.
inline void write_confusion_csv(std::ostream& out, const metrics::ConfusionMatrix& m) {
  out << "predicted\\actual";
  for (const auto& name : m.class_names()) out << ',' << name;
  out << '\n';
  for (std::size_t p = 0; p < m.size(); ++p) {
    out << m.class_names()[p];
    for (std::size_t a = 0; a < m.size(); ++a) out << ',' << m.at(p, a);
    out << '\n';
  }
}

inline void write_scores_csv(std::ostream& out, const EvaluationReport& r) {
  out << "class,precision,recall,f_measure,support\n";
  for (std::size_t k = 0; k < r.scores.size(); ++k) {
    const auto& s = r.scores[k];
    out << r.class_names[k] << ',' << io::format_double(s.precision) << ','
        << io::format_double(s.recall) << ',' << io::format_double(s.f_measure) << ','
        << r.confusion.column_sum(k) << '\n';
  }
}

inline void write_roc_csv(std::ostream& out, const metrics::RocCurve& curve) {
  out << "fpr,tpr,threshold\n";
  for (const auto& pt : curve.points) {
    out << io::format_double(pt.fpr) << ',' << io::format_double(pt.tpr) << ','
        << io::format_double(pt.threshold) << '\n';
  }
}

inline void write_summary(std::ostream& out, const EvaluationReport& r) {
  out << "mode: " << (r.mode == EvalMode::kTwoClass ? "2class" : "8class") << '\n';
  out << "records: " << r.confusion.total() << '\n';
  out << "accuracy: " << percent(r.accuracy) << "%\n\n";
  out << "class   precision  recall   f-measure  auc\n";
  for (std::size_t k = 0; k < r.scores.size(); ++k) {
    char line[128];
    const auto& s = r.scores[k];
    const std::string auc = r.roc[k] ? percent(100.0 * r.roc[k]->auc) + "%" : "n/a";
    std::snprintf(line, sizeof line, "%-7s %8s%%  %7s%%  %8s%%  %s\n", r.class_names[k].c_str(),
                  percent(s.precision).c_str(), percent(s.recall).c_str(),
                  percent(s.f_measure).c_str(), auc.c_str());
    out << line;
  }
  out << "\nconfusion (rows predicted, columns actual):\n";
  write_confusion_csv(out, r.confusion);
}

// Accuracy triple in the layout of the comparison table.
inline void write_comparison(std::ostream& out, double softmax, double nn, double sae) {
  out << "model     accuracy\n";
  out << "Soft-max  " << percent(softmax) << "%\n";
  out << "NN        " << percent(nn) << "%\n";
  out << "SAE       " << percent(sae) << "%\n";
}

// Writes summary.txt, confusion.csv, scores.csv and roc_<class>.csv into dir.
inline void write_report_dir(const std::filesystem::path& dir, const EvaluationReport& r) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create report directory " + dir.string() + ": " + ec.message());
  auto open = [&](const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + (dir / name).string());
    return f;
  };
  {
    auto f = open("summary.txt");
    write_summary(f, r);
  }
  {
    auto f = open("confusion.csv");
    write_confusion_csv(f, r.confusion);
  }
  {
    auto f = open("scores.csv");
    write_scores_csv(f, r);
  }
  for (std::size_t k = 0; k < r.roc.size(); ++k) {
    if (!r.roc[k]) continue;
    auto f = open("roc_" + r.class_names[k] + ".csv");
    write_roc_csv(f, *r.roc[k]);
  }
}

}  // namespace sdnddos::report
