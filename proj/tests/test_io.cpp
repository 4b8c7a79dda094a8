// Copyright 2026 The qmit authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qmit/io.hpp"

#include <unistd.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "qmit/errors.hpp"

using nlohmann::json;
using qmit::CalibrationRecord;
using qmit::DetectorSpec;
using qmit::ExperimentSpec;
using qmit::Mode;
using qmit::MultiQubitNoiseModel;
using qmit::ShotRecord;
using qmit::SingleQubitConfusion;

namespace {

// Per-process scratch directory so parallel test runs never collide.
std::filesystem::path scratch_dir() {
  static std::filesystem::path dir = [] {
    std::filesystem::path p =
        std::filesystem::temp_directory_path() / ("qmit_io_test_" + std::to_string(getpid()));
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

std::string scratch_file(const std::string &name) { return (scratch_dir() / name).string(); }

void write_text(const std::string &path, const std::string &text) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << text;
}

std::string read_text(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

SingleQubitConfusion make_confusion(double p00, double p01, double p10, double p11) {
  SingleQubitConfusion c;
  c.p[0][0] = p00;
  c.p[0][1] = p01;
  c.p[1][0] = p10;
  c.p[1][1] = p11;
  return c;
}

ShotRecord bits(const std::string &b, uint64_t count = 1) {
  ShotRecord rec;
  rec.bits = b;
  rec.count = count;
  return rec;
}

}  // namespace

TEST_CASE("dump_json emits a canonical, stable byte layout") {
  json j;
  j["b"] = 1;
  j["a"] = 2;
  std::string expected = "{\n  \"a\": 2,\n  \"b\": 1\n}\n";
  CHECK(qmit::dump_json(j) == expected);
  CHECK(qmit::dump_json(j) == qmit::dump_json(j));
}

TEST_CASE("json files round-trip and failures name the file") {
  std::string path = scratch_file("doc.json");
  json j = {{"schema", "qmit-test/1"}, {"value", 0.25}};
  qmit::save_json_file(path, j);
  CHECK(qmit::load_json_file(path) == j);
  // The bytes on disk are the canonical dump.
  CHECK(read_text(path) == qmit::dump_json(j));

  CHECK_THROWS_AS(qmit::load_json_file(scratch_file("missing.json")), qmit::ResourceError);

  std::string broken = scratch_file("broken.json");
  write_text(broken, "{not json");
  CHECK_THROWS_WITH_AS(qmit::load_json_file(broken), doctest::Contains("broken.json"),
                       qmit::ContractViolation);
}

TEST_CASE("binary detector models round-trip exactly") {
  auto model = MultiQubitNoiseModel::from_confusions(
      {make_confusion(0.95, 0.08, 0.05, 0.92), make_confusion(0.9, 0.15, 0.1, 0.85)});
  json j = qmit::model_to_json(model);
  CHECK(j.at("schema") == "qmit-detector/1");
  CHECK(j.at("mode") == "binary");
  MultiQubitNoiseModel back = qmit::model_from_json(j);
  REQUIRE(back.mode() == Mode::binary);
  REQUIRE(back.n_qubits() == 2);
  for (int q = 0; q < 2; q++) {
    for (int a = 0; a < 2; a++) {
      for (int t = 0; t < 2; t++) {
        CHECK(back.confusion(q)(a, t) == model.confusion(q)(a, t));
      }
    }
  }
}

TEST_CASE("analog detector models round-trip exactly") {
  qmit::ResponseFunction rf;
  rf.bin_edges = {-1.5, -0.25, 0.5, 2.0};
  rf.lambda[0] = {0.7, 0.2, 0.1};
  rf.lambda[1] = {0.05, 0.15, 0.8};
  auto model = MultiQubitNoiseModel::from_responses({rf});
  json j = qmit::model_to_json(model);
  CHECK(j.at("mode") == "analog");
  MultiQubitNoiseModel back = qmit::model_from_json(j);
  REQUIRE(back.mode() == Mode::analog);
  CHECK(back.response(0).bin_edges == rf.bin_edges);
  CHECK(back.response(0).lambda[0] == rf.lambda[0]);
  CHECK(back.response(0).lambda[1] == rf.lambda[1]);

  json bogus = {{"schema", "qmit-bogus/1"}};
  CHECK_THROWS_AS(qmit::model_from_json(bogus), qmit::ContractViolation);
}

TEST_CASE("shot files round-trip binary and analog records") {
  std::string path = scratch_file("shots.jsonl");
  ShotRecord analog;
  analog.q = {0.125, -1.75, 0.33333333333333331};
  std::vector<ShotRecord> shots = {bits("010", 1), bits("111", 42), analog};
  qmit::save_shots_jsonl(path, shots);
  std::vector<ShotRecord> back = qmit::load_shots_jsonl(path);
  REQUIRE(back.size() == 3);
  CHECK(back[0].bits == "010");
  CHECK(back[0].count == 1);
  CHECK(back[1].bits == "111");
  CHECK(back[1].count == 42);
  CHECK(back[2].q == analog.q);  // doubles survive the round trip bit-for-bit
  CHECK(back[2].count == 1);
}

TEST_CASE("shot file errors carry the line number") {
  std::string path = scratch_file("bad_shots.jsonl");

  write_text(path, "{\"bits\": \"01\"}\n{\"bits\": \"01\", \"q\": [0.5]}\n");
  CHECK_THROWS_WITH_AS(qmit::load_shots_jsonl(path), doctest::Contains("line 2"),
                       qmit::ContractViolation);

  write_text(path, "{\"q\": [0.5], \"count\": 2}\n");
  CHECK_THROWS_AS(qmit::load_shots_jsonl(path), qmit::ContractViolation);

  write_text(path, "{\"bits\": \"01\", \"count\": 0}\n");
  CHECK_THROWS_AS(qmit::load_shots_jsonl(path), qmit::ContractViolation);

  write_text(path, "not json at all\n");
  CHECK_THROWS_AS(qmit::load_shots_jsonl(path), qmit::ContractViolation);

  write_text(path, "");
  CHECK_THROWS_WITH_AS(qmit::load_shots_jsonl(path), doctest::Contains("no shot records"),
                       qmit::ContractViolation);

  CHECK_THROWS_AS(qmit::load_shots_jsonl(scratch_file("missing.jsonl")), qmit::ResourceError);
}

TEST_CASE("calibration files round-trip and validate") {
  std::string path = scratch_file("cal.jsonl");
  CalibrationRecord r0;
  r0.qubit_id = 0;
  r0.prepared_state = 0;
  r0.samples = {0.0, 1.0, 0.0};
  CalibrationRecord r1;
  r1.qubit_id = 1;
  r1.prepared_state = 1;
  r1.samples = {0.25, -0.5};
  qmit::save_calibration_jsonl(path, {r0, r1});
  std::vector<CalibrationRecord> back = qmit::load_calibration_jsonl(path);
  REQUIRE(back.size() == 2);
  CHECK(back[0].qubit_id == 0);
  CHECK(back[0].prepared_state == 0);
  CHECK(back[0].samples == r0.samples);
  CHECK(back[1].qubit_id == 1);
  CHECK(back[1].prepared_state == 1);
  CHECK(back[1].samples == r1.samples);

  write_text(path, "{\"qubit_id\": 0, \"prepared_state\": 2, \"samples\": [0.0]}\n");
  CHECK_THROWS_AS(qmit::load_calibration_jsonl(path), qmit::ContractViolation);

  // Shape errors carry the offending line; semantic ones name the field.
  write_text(path, "{\"qubit_id\": 0, \"prepared_state\": 0}\n");
  CHECK_THROWS_WITH_AS(qmit::load_calibration_jsonl(path), doctest::Contains("line 1"),
                       qmit::ContractViolation);
}

TEST_CASE("result payloads key populations by string and omit wall times") {
  auto model = MultiQubitNoiseModel::from_confusions({make_confusion(0.9, 0.1, 0.1, 0.9)});
  qmit::OutcomeTally tally = qmit::tally_shots({bits("0", 580), bits("1", 420)}, model);
  qmit::MitigationConfig cfg;
  qmit::MitigationResult result = qmit::mitigate(tally, model, cfg);
  json j = qmit::result_to_json(result, cfg);

  CHECK(j.at("schema") == "qmit-result/1");
  REQUIRE(j.at("populations").is_object());
  CHECK(j.at("populations").at("0").get<double>() == result.populations[0]);
  CHECK(j.at("populations").at("1").get<double>() == result.populations[1]);
  CHECK(j.at("sweeps").get<int>() == result.sweeps);
  CHECK(j.at("converged").get<bool>() == result.trace.converged);
  CHECK(j.at("tv_trace").size() == static_cast<size_t>(result.sweeps));
  CHECK(j.at("active_trace").size() == static_cast<size_t>(result.sweeps));
  CHECK(j.at("config").at("n_p").get<int>() == cfg.n_p);
  CHECK(j.at("config").at("epsilon").get<double>() == cfg.epsilon);
  CHECK(j.at("config").at("max_sweeps").get<int>() == cfg.max_sweeps);
  CHECK(j.at("config").at("estimator") == "argmax");
  CHECK(j.at("config").at("likelihood_floor").get<double>() == cfg.likelihood_floor);
  CHECK(!j.contains("pair_tv"));  // only written when a trace was recorded
  // Timing never enters the result payload; equivalent runs match bytewise.
  std::string dumped = qmit::dump_json(j);
  CHECK(dumped.find("seconds") == std::string::npos);
  CHECK(dumped.find("wall") == std::string::npos);

  cfg.record_pair_trace = true;
  qmit::MitigationResult traced = qmit::mitigate(tally, model, cfg);
  json jt = qmit::result_to_json(traced, cfg);
  CHECK(jt.contains("pair_tv"));
  CHECK(!jt.at("pair_tv").empty());
}

TEST_CASE("detector specs round-trip, including the optional threshold") {
  DetectorSpec spec;
  spec.qubits.resize(2);
  spec.qubits[0].mu0 = -1.25;
  spec.qubits[0].mu1 = 0.75;
  spec.qubits[0].sigma = 0.4;
  spec.qubits[0].threshold = 0.1;
  spec.qubits[1].sigma = 0.65;  // threshold stays NaN (midpoint)

  json j = qmit::detector_spec_to_json(spec);
  CHECK(j.at("schema") == "qmit-detector-spec/1");
  CHECK(j.at("qubits")[0].contains("threshold"));
  CHECK(!j.at("qubits")[1].contains("threshold"));

  DetectorSpec back = qmit::detector_spec_from_json(j);
  REQUIRE(back.n_qubits() == 2);
  CHECK(back.qubits[0].mu0 == spec.qubits[0].mu0);
  CHECK(back.qubits[0].mu1 == spec.qubits[0].mu1);
  CHECK(back.qubits[0].sigma == spec.qubits[0].sigma);
  CHECK(back.qubits[0].threshold == 0.1);
  CHECK(std::isnan(back.qubits[1].threshold));
  CHECK(back.qubits[1].sigma == 0.65);
}

TEST_CASE("experiment specs round-trip both truth encodings") {
  ExperimentSpec fixed;
  fixed.mode = Mode::analog;
  fixed.true_bits = "0110";
  fixed.n_shots = 12345;
  fixed.seed = 0xDEADBEEFull;
  json j = qmit::experiment_to_json(fixed);
  CHECK(j.at("schema") == "qmit-experiment/1");
  ExperimentSpec back = qmit::experiment_from_json(j);
  CHECK(back.mode == Mode::analog);
  CHECK(back.true_bits == "0110");
  CHECK(back.true_distribution.empty());
  CHECK(back.n_shots == 12345);
  CHECK(back.seed == 0xDEADBEEFull);

  ExperimentSpec dist;
  dist.true_distribution = {{"00", 0.25}, {"11", 0.75}};
  dist.n_shots = 10;
  dist.seed = 3;
  ExperimentSpec dist_back = qmit::experiment_from_json(qmit::experiment_to_json(dist));
  CHECK(dist_back.mode == Mode::binary);
  CHECK(dist_back.true_bits.empty());
  REQUIRE(dist_back.true_distribution.size() == 2);
  CHECK(dist_back.true_distribution[0].first == "00");
  CHECK(dist_back.true_distribution[0].second == 0.25);
  CHECK(dist_back.true_distribution[1].first == "11");
  CHECK(dist_back.true_distribution[1].second == 0.75);

  json bogus = {{"schema", "qmit-detector/1"}};
  CHECK_THROWS_AS(qmit::experiment_from_json(bogus), qmit::ContractViolation);
}
