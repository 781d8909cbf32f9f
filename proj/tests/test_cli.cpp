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

#include <gtest/gtest.h>

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sdnddos/cli.hpp"

namespace sdnddos {
namespace {

namespace fs = std::filesystem;

struct CliRun {
  int code;
  std::string out;
  std::string err;
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "sdnddos");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n'));
}

class CliWorkflow : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new fs::path(fs::temp_directory_path() / ("sdnddos_cli_" + std::to_string(::getpid())));
    fs::create_directories(*dir_);
    ScenarioSpec spec = default_scenario(9);
    spec.duration = 15 * 60.0;
    spec.attack_segments.clear();
    const std::uint8_t vectors[] = {kVectorTcp, kVectorUdp, kVectorIcmp,
                                    kVectorTcp | kVectorUdp, kVectorTcp | kVectorIcmp,
                                    kVectorUdp | kVectorIcmp,
                                    kVectorTcp | kVectorUdp | kVectorIcmp};
    double t = 60;
    for (std::uint8_t v : vectors) {
      AttackSegment s;
      s.start = t;
      s.end = t + 60;
      s.vectors = v;
      s.victim = spec.victims.at(0);
      s.packet_rate = 20.0;
      spec.attack_segments.push_back(s);
      t += 120;
    }
    std::ofstream(path("spec.json")) << io::scenario_to_json(spec).dump(2);
    ASSERT_EQ(run({"gen", "--spec", path("spec.json"), "--out", path("trace.csv"), "--labels",
                   path("labels.csv")})
                  .code,
              0);
    ASSERT_EQ(run({"extract", "--trace", path("trace.csv"), "--labels", path("labels.csv"),
                   "--out", path("data.csv")})
                  .code,
              0);
    ASSERT_EQ(run({"train", "--train", path("data.csv"), "--model", path("model.json"),
                   "--epochs-pretrain", "20", "--epochs-finetune", "20"})
                  .code,
              0);
  }
  static void TearDownTestSuite() {
    fs::remove_all(*dir_);
    delete dir_;
  }
  static std::string path(const std::string& name) { return (*dir_ / name).string(); }

  static fs::path* dir_;
};

fs::path* CliWorkflow::dir_ = nullptr;

TEST_F(CliWorkflow, GenIsByteIdentical) {
  const CliRun r = run({"gen", "--spec", path("spec.json"), "--out", path("trace2.csv"), "--labels",
                     path("labels2.csv"), "--pcap", path("trace2.pcap")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("trace2.csv")), slurp(path("trace.csv")));
  EXPECT_EQ(slurp(path("labels2.csv")), slurp(path("labels.csv")));
  EXPECT_GT(fs::file_size(path("trace2.pcap")), 24u);
  EXPECT_NE(r.out.find("packets: "), std::string::npos);
}

TEST_F(CliWorkflow, GenRejectsVictimOutsideHosts) {
  io::Json j = io::Json::parse(slurp(path("spec.json")));
  j["victims"] = io::Json::array({"192.168.7.7"});
  std::ofstream(path("bad.json")) << j.dump();
  const CliRun r = run({"gen", "--spec", path("bad.json"), "--out", path("x.csv"), "--labels",
                     path("y.csv")});
  EXPECT_EQ(r.code, cli::kExitInvalid);
  EXPECT_FALSE(r.err.empty());
}

TEST_F(CliWorkflow, NormalOnlyScenarioHasNoAttackedIntervals) {
  io::Json j = io::Json::parse(slurp(path("spec.json")));
  j["attack_segments"] = io::Json::array();
  j["duration"] = 300;
  std::ofstream(path("normal.json")) << j.dump();
  ASSERT_EQ(run({"gen", "--spec", path("normal.json"), "--out", path("n.csv"), "--labels",
                 path("n_labels.csv")})
                .code,
            0);
  std::istringstream in(slurp(path("n_labels.csv")));
  const GroundTruth truth = io::read_labels(in);
  EXPECT_FALSE(truth.empty());
  for (const auto& [key, cls] : truth) EXPECT_EQ(cls, TrafficClass::N);
}

TEST_F(CliWorkflow, ExtractWritesFullHeaderAndIsRepeatable) {
  const std::string data = slurp(path("data.csv"));
  EXPECT_EQ(data.substr(0, data.find('\n')), io::dataset_header());
  ASSERT_EQ(run({"extract", "--trace", path("trace.csv"), "--labels", path("labels.csv"), "--out",
                 path("data2.csv")})
                .code,
            0);
  EXPECT_EQ(slurp(path("data2.csv")), data);
}

TEST_F(CliWorkflow, ExtractOfEmptyTraceIsHeaderOnly) {
  std::ofstream(path("empty.csv")) << io::kTraceHeader << '\n';
  std::ofstream(path("empty_labels.csv")) << io::kLabelsHeader << '\n';
  ASSERT_EQ(run({"extract", "--trace", path("empty.csv"), "--labels", path("empty_labels.csv"),
                 "--out", path("empty_data.csv")})
                .code,
            0);
  EXPECT_EQ(slurp(path("empty_data.csv")), io::dataset_header() + "\n");
}

TEST_F(CliWorkflow, TrainIsDeterministicAndCompact) {
  const CliRun r = run({"train", "--train", path("data.csv"), "--model", path("model2.json"),
                     "--epochs-pretrain", "20", "--epochs-finetune", "20"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(slurp(path("model2.json")), slurp(path("model.json")));
  EXPECT_LT(fs::file_size(path("model.json")), 2u << 20);
  EXPECT_NE(r.out.find("fine-tune:"), std::string::npos);
}

TEST_F(CliWorkflow, TrainWithZeroEpochsGivesInitialModel) {
  ASSERT_EQ(run({"train", "--train", path("data.csv"), "--model", path("model0.json"),
                 "--epochs-pretrain", "0", "--epochs-finetune", "0"})
                .code,
            0);
  std::ifstream in(path("model0.json"));
  const io::ModelFile f = io::read_model(in);
  EXPECT_EQ(f.model, sae::initial_model(f.model.hyper, f.model.class_names));
}

TEST_F(CliWorkflow, TrainRejectsMissingClass) {
  std::istringstream in(slurp(path("data.csv")));
  auto records = io::read_dataset(in);
  std::erase_if(records, [](const LabeledRecord& r) { return r.label == static_cast<int>(TrafficClass::UI); });
  std::ostringstream out;
  io::write_dataset(out, records);
  std::ofstream(path("missing.csv")) << out.str();
  const CliRun r = run({"train", "--train", path("missing.csv"), "--model", path("m.json"),
                     "--epochs-pretrain", "1", "--epochs-finetune", "1"});
  EXPECT_NE(r.code, 0);
  EXPECT_FALSE(fs::exists(path("m.json")));
}

TEST_F(CliWorkflow, TrainRejectsBadArchitecture) {
  EXPECT_EQ(run({"train", "--train", path("data.csv"), "--model", path("m.json"), "--arch", "60,30"})
                .code,
            cli::kExitInvalid);
  EXPECT_EQ(run({"train", "--train", path("data.csv"), "--model", path("m.json"), "--classes", "3"})
                .code,
            cli::kExitInvalid);
}

TEST_F(CliWorkflow, EvalReportsAreConsistent) {
  const CliRun eight = run({"eval", "--model", path("model.json"), "--test", path("data.csv"),
                         "--report", path("report8")});
  ASSERT_EQ(eight.code, 0) << eight.err;
  const CliRun again = run({"eval", "--model", path("model.json"), "--test", path("data.csv")});
  EXPECT_EQ(again.out, eight.out);
  EXPECT_EQ(slurp(path("report8") + "/summary.txt"), eight.out);

  std::istringstream conf(slurp(path("report8") + "/confusion.csv"));
  std::string line;
  std::getline(conf, line);
  std::uint64_t total = 0, diag = 0;
  for (std::size_t row = 0; std::getline(conf, line); ++row) {
    std::istringstream cells(line);
    std::string cell;
    std::getline(cells, cell, ',');
    for (std::size_t col = 0; std::getline(cells, cell, ','); ++col) {
      const auto v = std::stoull(cell);
      total += v;
      if (col == row) diag += v;
    }
  }
  std::istringstream data(slurp(path("data.csv")));
  EXPECT_EQ(total, io::read_dataset(data).size());
  const std::string expected =
      "accuracy: " + report::percent(100.0 * static_cast<double>(diag) / static_cast<double>(total)) + "%";
  EXPECT_NE(eight.out.find(expected), std::string::npos);
}

TEST_F(CliWorkflow, EvalTwoClassMode) {
  const CliRun r = run({"eval", "--model", path("model.json"), "--test", path("data.csv"), "--mode",
                     "2class", "--report", path("report2")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("mode: 2class"), std::string::npos);
  const std::string conf = slurp(path("report2") + "/confusion.csv");
  EXPECT_EQ(count_lines(conf), 3u);
  EXPECT_EQ(conf.substr(0, conf.find('\n')), "predicted\\actual,N,Attack");
  EXPECT_EQ(run({"eval", "--model", path("model.json"), "--test", path("data.csv"), "--mode", "3class"})
                .code,
            cli::kExitInvalid);
}

TEST_F(CliWorkflow, BinaryModelCannotEvaluateEightClasses) {
  ASSERT_EQ(run({"train", "--train", path("data.csv"), "--model", path("bin.json"), "--classes",
                 "2", "--epochs-pretrain", "5", "--epochs-finetune", "5"})
                .code,
            0);
  EXPECT_EQ(run({"eval", "--model", path("bin.json"), "--test", path("data.csv"), "--mode", "2class"})
                .code,
            0);
  EXPECT_EQ(run({"eval", "--model", path("bin.json"), "--test", path("data.csv")}).code,
            cli::kExitInvalid);
}

TEST_F(CliWorkflow, DetectCoversEveryHostInterval) {
  const CliRun r = run({"detect", "--model", path("model.json"), "--trace", path("trace.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::istringstream data(slurp(path("data.csv")));
  EXPECT_EQ(count_lines(r.out), io::read_dataset(data).size());
  EXPECT_EQ(run({"detect", "--model", path("model.json"), "--trace", path("trace.csv")}).out, r.out);
  std::istringstream lines(r.out);
  std::string first;
  std::getline(lines, first);
  EXPECT_EQ(std::count(first.begin(), first.end(), ','), 3);
}

TEST_F(CliWorkflow, MissingInputsFailCleanly) {
  EXPECT_EQ(run({"eval", "--model", path("nope.json"), "--test", path("data.csv")}).code,
            cli::kExitInvalid);
  EXPECT_EQ(run({"detect", "--model", path("data.csv"), "--trace", path("trace.csv")}).code,
            cli::kExitInvalid);
  EXPECT_NE(run({"frobnicate"}).code, 0);
  EXPECT_NE(run({}).code, 0);
}

TEST(CliScenario, BundledScenariosMatchDefaults) {
  for (const auto& [seed, name] : {std::pair{"1", "train.json"}, std::pair{"2", "test.json"}}) {
    const CliRun r = run({"scenario", "--seed", seed});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out, slurp(fs::path(SDNDDOS_DATA_DIR) / "scenarios" / name)) << name;
  }
}

TEST(CliBinary, ExitCodesPropagate) {
  const std::string cli = SDNDDOS_CLI;
  EXPECT_EQ(std::system((cli + " scenario --seed 3 > /dev/null").c_str()), 0);
  const int status = std::system((cli + " eval --model /nonexistent --test /nonexistent 2> /dev/null").c_str());
  ASSERT_TRUE(WIFEXITED(status));
  EXPECT_EQ(WEXITSTATUS(status), cli::kExitInvalid);
}

}  // namespace
}  // namespace sdnddos
