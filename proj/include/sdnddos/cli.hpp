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

// Command-line front end: gen, extract, train, eval, detect, scenario,
// experiment. Exit codes: 0 success, 1 invalid input, 2 runtime failure.

#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sdnddos/csv_io.hpp"
#include "sdnddos/errors.hpp"
#include "sdnddos/json_io.hpp"
#include "sdnddos/pcap.hpp"
#include "sdnddos/pipeline.hpp"
#include "sdnddos/report.hpp"

namespace sdnddos::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalid = 1;
inline constexpr int kExitRuntime = 2;

namespace detail {

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path);
  return in;
}

// Output is rendered in memory first so a failure leaves no partial file.
inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size()))) {
    throw ConfigError("cannot write " + path);
  }
}

inline Topology load_topology(const std::string& path) {
  if (path.empty()) return {};
  auto in = open_input(path);
  return Topology::parse(in);
}

inline void print_series(std::ostream& out, const std::string& stage,
                         const std::vector<std::pair<int, double>>& series) {
  if (series.empty()) return;
  out << stage << ':';
  for (const auto& [epoch, cost] : series) out << ' ' << epoch << '=' << io::format_double(cost);
  out << '\n';
}

struct TrainOptions {
  std::string train_path;
  std::string model_path;
  std::vector<std::size_t> arch{68, 34, 17};
  std::size_t classes = 8;
  sae::Hyperparams h;
};

inline int cmd_gen(const std::string& spec_path, const std::string& out_path,
                   const std::string& labels_path, const std::string& pcap_path, std::ostream& out) {
  auto in = open_input(spec_path);
  const ScenarioSpec spec = io::read_scenario(in);
  const GeneratedTrace trace = generate(spec);
  std::ostringstream csv, labels;
  io::write_trace(csv, trace.packets);
  io::write_labels(labels, trace.labels);
  write_file(out_path, csv.str());
  write_file(labels_path, labels.str());
  if (!pcap_path.empty()) {
    std::ostringstream bin;
    pcap::write(bin, trace.packets);
    write_file(pcap_path, bin.str());
  }
  std::size_t attacked = 0;
  for (const auto& [key, cls] : trace.labels) attacked += cls != TrafficClass::N;
  out << "packets: " << trace.packets.size() << "\nhost-intervals: " << trace.labels.size()
      << "\nattacked host-intervals: " << attacked << '\n';
  return kExitOk;
}

inline int cmd_extract(const std::string& trace_path, const std::string& labels_path,
                       double interval, const std::string& out_path,
                       const std::string& topology_path, std::ostream& out) {
  auto trace_in = open_input(trace_path);
  const auto packets = io::read_trace(trace_in, trace_path);
  auto labels_in = open_input(labels_path);
  const GroundTruth truth = io::read_labels(labels_in, labels_path);
  ReplayStats stats;
  const auto vectors = replay(packets, interval, load_topology(topology_path), &stats);
  const auto records = join_labels(vectors, truth);
  std::ostringstream csv;
  io::write_dataset(csv, records);
  write_file(out_path, csv.str());
  out << "packets: " << stats.packets << "\nintervals: " << stats.intervals
      << "\nrecords: " << records.size() << "\nrule pairs installed: "
      << stats.rule_pairs_installed << '\n';
  return kExitOk;
}

inline int cmd_train(TrainOptions opt, std::ostream& out) {
  auto in = open_input(opt.train_path);
  const auto raw = io::read_dataset(in, opt.train_path);
  if (raw.empty()) throw ValidationError("training dataset is empty");
  if (opt.classes != 8 && opt.classes != 2) throw ValidationError("--classes must be 8 or 2");
  opt.h.layer_sizes = opt.arch;
  opt.h.num_classes = opt.classes;

  const Normalized train = normalize(raw, std::nullopt);
  const bool binary = opt.classes == 2;
  const sae::Matrix X = feature_matrix(train.records);
  const std::vector<int> y = label_vector(train.records, binary);
  sae::TrainingLog log;
  io::ModelFile file;
  file.model = sae::train_sae(X, y, opt.h, binary ? two_class_names() : eight_class_names(), &log);
  file.normalization = train.params;

  std::ostringstream json;
  io::write_model(json, file);
  write_file(opt.model_path, json.str());

  out << "records: " << raw.size() << "\ncost trajectory (epoch=cost):\n";
  for (std::size_t l = 0; l < log.pretrain.size(); ++l) {
    print_series(out, "  pretrain layer " + std::to_string(l + 1), log.pretrain[l]);
  }
  print_series(out, "  softmax head", log.head);
  print_series(out, "  fine-tune", log.finetune);
  const auto P = sae::argmax_columns(sae::predict_proba(file.model, X));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < y.size(); ++i) correct += P[i] == y[i];
  out << "training accuracy: "
      << report::percent(100.0 * static_cast<double>(correct) / static_cast<double>(y.size()))
      << "%\n";
  return kExitOk;
}

inline io::ModelFile load_model(const std::string& path) {
  auto in = open_input(path);
  return io::read_model(in);
}

inline std::vector<LabeledRecord> normalized_with(std::span<const LabeledRecord> raw,
                                                  const NormalizationParams& params) {
  return normalize(raw, params).records;
}

inline int cmd_eval(const std::string& model_path, const std::string& test_path,
                    const std::string& mode, const std::string& report_dir, std::ostream& out) {
  const io::ModelFile file = load_model(model_path);
  auto in = open_input(test_path);
  const auto raw = io::read_dataset(in, test_path);
  const EvalMode m = mode == "2class" ? EvalMode::kTwoClass : EvalMode::kEightClass;
  const auto test = normalized_with(raw, file.normalization);
  const EvaluationReport r = evaluate(file.model, test, m);
  if (!report_dir.empty()) report::write_report_dir(report_dir, r);
  report::write_summary(out, r);
  return kExitOk;
}

inline int cmd_detect(const std::string& model_path, const std::string& trace_path,
                      double interval, const std::string& topology_path, std::ostream& out) {
  const io::ModelFile file = load_model(model_path);
  auto in = open_input(trace_path);
  const auto packets = io::read_trace(in, trace_path);
  const auto vectors = replay(packets, interval, load_topology(topology_path));
  if (vectors.empty()) return kExitOk;
  sae::Matrix X(static_cast<Eigen::Index>(kFeatureCount), static_cast<Eigen::Index>(vectors.size()));
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const FeatureVector fv = apply_normalization(vectors[i], file.normalization, true);
    for (std::size_t f = 0; f < kFeatureCount; ++f) {
      X(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(i)) = fv.values[f];
    }
  }
  const sae::Matrix P = sae::predict_proba(file.model, X);
  const auto best = sae::argmax_columns(P);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    out << io::format_double(vectors[i].interval_start) << ',' << vectors[i].host.to_string() << ','
        << file.model.class_names.at(static_cast<std::size_t>(best[i])) << ','
        << io::format_double(P(best[i], col)) << '\n';
  }
  return kExitOk;
}

inline int cmd_scenario(std::uint64_t seed, const std::string& out_path, std::ostream& out) {
  std::ostringstream json;
  io::write_scenario(json, default_scenario(seed));
  if (out_path.empty()) {
    out << json.str();
  } else {
    write_file(out_path, json.str());
  }
  return kExitOk;
}

inline int cmd_experiment(const std::string& train_spec, const std::string& test_spec,
                          const sae::Hyperparams& h, std::ostream& out) {
  auto a = open_input(train_spec);
  auto b = open_input(test_spec);
  const ScenarioSpec train = io::read_scenario(a);
  const ScenarioSpec test = io::read_scenario(b);
  if (train.seed == test.seed) throw ValidationError("train and test scenarios share a seed");
  const ExperimentResult r = run_experiment(train, test, h);
  out << "train records: " << r.train_records << "\ntest records: " << r.test_records << "\n\n";
  report::write_comparison(out, r.softmax_accuracy, r.nn_accuracy, r.sae_eight.accuracy);
  out << "\nSAE 8-class: " << report::percent(r.sae_eight.accuracy)
      << "%\nSAE 2-class: " << report::percent(r.sae_two.accuracy) << "%\n";
  return kExitOk;
}

inline void add_hyperparam_flags(CLI::App* cmd, sae::Hyperparams& h) {
  cmd->add_option("--seed", h.seed, "model RNG seed")->capture_default_str();
  cmd->add_option("--epochs-pretrain", h.epochs_pretrain, "epochs per greedy stage")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--epochs-finetune", h.epochs_finetune, "fine-tuning epochs")
      ->capture_default_str()->check(CLI::NonNegativeNumber);
  cmd->add_option("--lr", h.learning_rate, "autoencoder learning rate")->capture_default_str();
  cmd->add_option("--finetune-lr", h.finetune_learning_rate, "head and fine-tuning learning rate")
      ->capture_default_str();
  cmd->add_option("--lambda", h.lambda, "weight decay")->capture_default_str();
  cmd->add_option("--beta", h.beta, "sparsity weight")->capture_default_str();
  cmd->add_option("--rho", h.rho, "sparsity target")->capture_default_str();
  cmd->add_option("--decay-biases", h.decay_biases, "include biases in weight decay")
      ->capture_default_str();
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"DDoS detection for a simulated reactive SDN switch", "sdnddos"};
  app.require_subcommand(1);

  std::string spec_path, trace_path, labels_path, pcap_path, out_path, topology_path;
  std::string model_path, test_path, mode = "8class", report_dir;
  std::string train_spec, test_spec;
  double interval = kDefaultInterval;
  std::uint64_t seed = 1;
  detail::TrainOptions train;

  auto* gen = app.add_subcommand("gen", "generate a packet trace and labels from a scenario");
  gen->add_option("--spec", spec_path, "scenario JSON")->required();
  gen->add_option("--out", out_path, "trace CSV")->required();
  gen->add_option("--labels", labels_path, "labels CSV")->required();
  gen->add_option("--pcap", pcap_path, "also write a pcap file");

  auto* extract = app.add_subcommand("extract", "replay a trace and write the feature dataset");
  extract->add_option("--trace", trace_path, "trace CSV")->required();
  extract->add_option("--labels", labels_path, "labels CSV")->required();
  extract->add_option("--interval", interval, "collection interval (s)")->capture_default_str();
  extract->add_option("--out", out_path, "dataset CSV")->required();
  extract->add_option("--topology", topology_path, "switch topology file");

  auto* tr = app.add_subcommand("train", "train a stacked autoencoder classifier");
  tr->add_option("--train", train.train_path, "dataset CSV")->required();
  tr->add_option("--model", train.model_path, "output model JSON")->required();
  tr->add_option("--arch", train.arch, "layer sizes")->delimiter(',')->capture_default_str();
  tr->add_option("--classes", train.classes, "8 or 2")->capture_default_str();
  detail::add_hyperparam_flags(tr, train.h);

  auto* ev = app.add_subcommand("eval", "evaluate a model on a dataset");
  ev->add_option("--model", model_path, "model JSON")->required();
  ev->add_option("--test", test_path, "dataset CSV")->required();
  ev->add_option("--mode", mode, "8class or 2class")
      ->check(CLI::IsMember({"8class", "2class"}))->capture_default_str();
  ev->add_option("--report", report_dir, "report directory");

  auto* det = app.add_subcommand("detect", "classify every host-interval of a trace");
  det->add_option("--model", model_path, "model JSON")->required();
  det->add_option("--trace", trace_path, "trace CSV")->required();
  det->add_option("--interval", interval, "collection interval (s)")->capture_default_str();
  det->add_option("--topology", topology_path, "switch topology file");

  auto* sc = app.add_subcommand("scenario", "write the bundled default scenario");
  sc->add_option("--seed", seed, "scenario seed")->capture_default_str();
  sc->add_option("--out", out_path, "scenario JSON (stdout if omitted)");

  sae::Hyperparams exp_h;
  auto* ex = app.add_subcommand("experiment", "train on one scenario and compare models on another");
  ex->add_option("--train-spec", train_spec, "training scenario JSON")->required();
  ex->add_option("--test-spec", test_spec, "test scenario JSON")->required();
  detail::add_hyperparam_flags(ex, exp_h);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (*gen) return detail::cmd_gen(spec_path, out_path, labels_path, pcap_path, out);
    if (*extract) {
      return detail::cmd_extract(trace_path, labels_path, interval, out_path, topology_path, out);
    }
    if (*tr) return detail::cmd_train(train, out);
    if (*ev) return detail::cmd_eval(model_path, test_path, mode, report_dir, out);
    if (*det) return detail::cmd_detect(model_path, trace_path, interval, topology_path, out);
    if (*sc) return detail::cmd_scenario(seed, out_path, out);
    if (*ex) return detail::cmd_experiment(train_spec, test_spec, exp_h, out);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitInvalid;
}

}  // namespace sdnddos::cli
