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

#include <cmath>
#include <fstream>
#include <sstream>

#include "qmit/errors.hpp"

namespace qmit {

namespace {

using nlohmann::json;

json parse_json_text(const std::string &text, const std::string &context) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) {
    throw ContractViolation("malformed JSON in " + context);
  }
  return j;
}

void require_schema(const json &j, const std::string &schema, const std::string &context) {
  if (!j.is_object() || j.value("schema", std::string()) != schema) {
    throw ContractViolation(context + " must carry \"schema\": \"" + schema + "\"");
  }
}

double number_field(const json &j, const char *field, const std::string &context) {
  auto it = j.find(field);
  if (it == j.end() || !it->is_number()) {
    throw ContractViolation(context + " needs a numeric \"" + field + "\"");
  }
  return it->get<double>();
}

std::vector<double> double_array(const json &j, const std::string &context) {
  if (!j.is_array()) {
    throw ContractViolation(context + " must be an array of numbers");
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto &v : j) {
    if (!v.is_number()) {
      throw ContractViolation(context + " must contain only numbers");
    }
    out.push_back(v.get<double>());
  }
  return out;
}

std::ifstream open_input(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw ResourceError("cannot open '" + path + "' for reading");
  }
  return in;
}

std::ofstream open_output(const std::string &path) {
  std::ofstream out(path);
  if (!out) {
    throw ResourceError("cannot open '" + path + "' for writing");
  }
  return out;
}

}  // namespace

json load_json_file(const std::string &path) {
  std::ifstream in = open_input(path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_json_text(buffer.str(), "'" + path + "'");
}

void save_json_file(const std::string &path, const json &j) {
  std::ofstream out = open_output(path);
  out << dump_json(j);
  if (!out) {
    throw ResourceError("failed writing '" + path + "'");
  }
}

std::string dump_json(const json &j) { return j.dump(2) + "\n"; }

json model_to_json(const MultiQubitNoiseModel &model) {
  json qubits = json::array();
  if (model.mode() == Mode::binary) {
    for (int q = 0; q < model.n_qubits(); q++) {
      const SingleQubitConfusion &c = model.confusion(q);
      qubits.push_back({{"qubit_id", q},
                        {"matrix", {{c(0, 0), c(0, 1)}, {c(1, 0), c(1, 1)}}}});
    }
  } else {
    for (int q = 0; q < model.n_qubits(); q++) {
      const ResponseFunction &rf = model.response(q);
      qubits.push_back({{"qubit_id", q},
                        {"bin_edges", rf.bin_edges},
                        {"lambda", {rf.lambda[0], rf.lambda[1]}}});
    }
  }
  return {{"schema", "qmit-detector/1"},
          {"mode", to_string(model.mode())},
          {"qubits", std::move(qubits)}};
}

MultiQubitNoiseModel model_from_json(const json &j) {
  require_schema(j, "qmit-detector/1", "detector file");
  Mode mode = mode_from_string(j.value("mode", std::string()));
  auto it = j.find("qubits");
  if (it == j.end() || !it->is_array() || it->empty()) {
    throw ContractViolation("detector file needs a nonempty \"qubits\" array");
  }
  const json &qubits = *it;
  for (size_t q = 0; q < qubits.size(); q++) {
    std::string context = "detector qubit " + std::to_string(q);
    if (!qubits[q].is_object() ||
        qubits[q].value("qubit_id", -1) != static_cast<int>(q)) {
      throw ContractViolation(context + " must carry \"qubit_id\": " + std::to_string(q) +
                              "; entries are ordered");
    }
  }
  if (mode == Mode::binary) {
    std::vector<SingleQubitConfusion> conf(qubits.size());
    for (size_t q = 0; q < qubits.size(); q++) {
      std::string context = "detector qubit " + std::to_string(q);
      const json &m = qubits[q].value("matrix", json());
      if (!m.is_array() || m.size() != 2) {
        throw ContractViolation(context + " needs a 2x2 \"matrix\"");
      }
      for (int a = 0; a < 2; a++) {
        std::vector<double> row = double_array(m[a], context + " matrix row");
        if (row.size() != 2) {
          throw ContractViolation(context + " needs a 2x2 \"matrix\"");
        }
        conf[q].p[a][0] = row[0];
        conf[q].p[a][1] = row[1];
      }
    }
    return MultiQubitNoiseModel::from_confusions(std::move(conf));
  }
  std::vector<ResponseFunction> resp(qubits.size());
  for (size_t q = 0; q < qubits.size(); q++) {
    std::string context = "detector qubit " + std::to_string(q);
    resp[q].bin_edges = double_array(qubits[q].value("bin_edges", json()), context + " bin_edges");
    const json &lam = qubits[q].value("lambda", json());
    if (!lam.is_array() || lam.size() != 2) {
      throw ContractViolation(context + " needs two \"lambda\" rows");
    }
    resp[q].lambda[0] = double_array(lam[0], context + " lambda[0]");
    resp[q].lambda[1] = double_array(lam[1], context + " lambda[1]");
  }
  return MultiQubitNoiseModel::from_responses(std::move(resp));
}

void save_shots_jsonl(const std::string &path, const std::vector<ShotRecord> &shots) {
  std::ofstream out = open_output(path);
  for (const ShotRecord &shot : shots) {
    json line;
    if (shot.is_analog()) {
      line["q"] = shot.q;
    } else {
      line["bits"] = shot.bits;
      if (shot.count != 1) {
        line["count"] = shot.count;
      }
    }
    out << line.dump() << "\n";
  }
  if (!out) {
    throw ResourceError("failed writing '" + path + "'");
  }
}

std::vector<ShotRecord> load_shots_jsonl(const std::string &path) {
  std::ifstream in = open_input(path);
  std::vector<ShotRecord> shots;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) {
      continue;
    }
    std::string context = "'" + path + "' line " + std::to_string(line_no);
    json j = parse_json_text(line, context);
    bool has_bits = j.contains("bits");
    bool has_q = j.contains("q");
    if (has_bits == has_q) {
      throw ContractViolation(context + " must have exactly one of \"bits\" or \"q\"");
    }
    ShotRecord rec;
    if (has_bits) {
      if (!j["bits"].is_string()) {
        throw ContractViolation(context + ": \"bits\" must be a string");
      }
      rec.bits = j["bits"].get<std::string>();
      if (j.contains("count")) {
        if (!j["count"].is_number_unsigned() || j["count"].get<uint64_t>() == 0) {
          throw ContractViolation(context + ": \"count\" must be a positive integer");
        }
        rec.count = j["count"].get<uint64_t>();
      }
    } else {
      if (j.contains("count")) {
        throw ContractViolation(context + ": analog records cannot carry \"count\"");
      }
      rec.q = double_array(j["q"], context + ": \"q\"");
    }
    shots.push_back(std::move(rec));
  }
  if (shots.empty()) {
    throw ContractViolation("'" + path + "' contains no shot records");
  }
  return shots;
}

void save_calibration_jsonl(const std::string &path,
                            const std::vector<CalibrationRecord> &records) {
  std::ofstream out = open_output(path);
  for (const CalibrationRecord &rec : records) {
    json line = {{"qubit_id", rec.qubit_id},
                 {"prepared_state", rec.prepared_state},
                 {"samples", rec.samples}};
    out << line.dump() << "\n";
  }
  if (!out) {
    throw ResourceError("failed writing '" + path + "'");
  }
}

std::vector<CalibrationRecord> load_calibration_jsonl(const std::string &path) {
  std::ifstream in = open_input(path);
  std::vector<CalibrationRecord> records;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    line_no++;
    if (line.empty()) {
      continue;
    }
    std::string context = "'" + path + "' line " + std::to_string(line_no);
    json j = parse_json_text(line, context);
    CalibrationRecord rec;
    rec.qubit_id = static_cast<int>(number_field(j, "qubit_id", context));
    rec.prepared_state = static_cast<int>(number_field(j, "prepared_state", context));
    rec.samples = double_array(j.value("samples", json()), context + ": \"samples\"");
    rec.validate();
    records.push_back(std::move(rec));
  }
  if (records.empty()) {
    throw ContractViolation("'" + path + "' contains no calibration records");
  }
  return records;
}

json result_to_json(const MitigationResult &result, const MitigationConfig &config) {
  json populations = json::object();
  for (size_t k = 0; k < result.strings.size(); k++) {
    populations[result.strings[k]] = result.populations[k];
  }
  json tv_trace = json::array();
  json active_trace = json::array();
  for (const SweepRecord &rec : result.trace.sweeps) {
    tv_trace.push_back(rec.tv_change);
    active_trace.push_back(rec.active_strings);
  }
  json out = {{"schema", "qmit-result/1"},
              {"populations", std::move(populations)},
              {"sweeps", result.sweeps},
              {"converged", result.trace.converged},
              {"tv_trace", std::move(tv_trace)},
              {"active_trace", std::move(active_trace)},
              {"config",
               {{"n_p", config.n_p},
                {"epsilon", config.epsilon},
                {"max_sweeps", config.max_sweeps},
                {"estimator", to_string(config.estimator)},
                {"likelihood_floor", config.likelihood_floor}}}};
  if (!result.pair_tv.empty()) {
    out["pair_tv"] = result.pair_tv;
  }
  return out;
}

json detector_spec_to_json(const DetectorSpec &spec) {
  json qubits = json::array();
  for (const DetectorQubit &d : spec.qubits) {
    json q = {{"mu0", d.mu0}, {"mu1", d.mu1}, {"sigma", d.sigma}};
    if (!std::isnan(d.threshold)) {
      q["threshold"] = d.threshold;
    }
    qubits.push_back(std::move(q));
  }
  return {{"schema", "qmit-detector-spec/1"}, {"qubits", std::move(qubits)}};
}

DetectorSpec detector_spec_from_json(const json &j) {
  require_schema(j, "qmit-detector-spec/1", "detector spec");
  auto it = j.find("qubits");
  if (it == j.end() || !it->is_array() || it->empty()) {
    throw ContractViolation("detector spec needs a nonempty \"qubits\" array");
  }
  DetectorSpec spec;
  for (size_t q = 0; q < it->size(); q++) {
    std::string context = "detector spec qubit " + std::to_string(q);
    const json &entry = (*it)[q];
    DetectorQubit d;
    d.mu0 = number_field(entry, "mu0", context);
    d.mu1 = number_field(entry, "mu1", context);
    d.sigma = number_field(entry, "sigma", context);
    if (entry.contains("threshold")) {
      d.threshold = number_field(entry, "threshold", context);
    }
    spec.qubits.push_back(d);
  }
  spec.validate();
  return spec;
}

json experiment_to_json(const ExperimentSpec &experiment) {
  json out = {{"schema", "qmit-experiment/1"},
              {"mode", to_string(experiment.mode)},
              {"n_shots", experiment.n_shots},
              {"seed", experiment.seed}};
  if (!experiment.true_bits.empty()) {
    out["true_bits"] = experiment.true_bits;
  }
  if (!experiment.true_distribution.empty()) {
    json dist = json::object();
    for (const auto &[bits, weight] : experiment.true_distribution) {
      dist[bits] = weight;
    }
    out["true_distribution"] = std::move(dist);
  }
  return out;
}

ExperimentSpec experiment_from_json(const json &j) {
  require_schema(j, "qmit-experiment/1", "experiment spec");
  ExperimentSpec experiment;
  experiment.mode = mode_from_string(j.value("mode", std::string()));
  if (!j.contains("n_shots") || !j["n_shots"].is_number_unsigned()) {
    throw ContractViolation("experiment spec needs an unsigned \"n_shots\"");
  }
  experiment.n_shots = j["n_shots"].get<uint64_t>();
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) {
      throw ContractViolation("experiment \"seed\" must be an unsigned integer");
    }
    experiment.seed = j["seed"].get<uint64_t>();
  }
  if (j.contains("true_bits")) {
    if (!j["true_bits"].is_string()) {
      throw ContractViolation("experiment \"true_bits\" must be a string");
    }
    experiment.true_bits = j["true_bits"].get<std::string>();
  }
  if (j.contains("true_distribution")) {
    const json &dist = j["true_distribution"];
    if (!dist.is_object() || dist.empty()) {
      throw ContractViolation("experiment \"true_distribution\" must be a nonempty object");
    }
    // nlohmann objects iterate in sorted key order, so the stored vector and
    // the sampling CDF built from it are canonical.
    for (const auto &[bits, weight] : dist.items()) {
      if (!weight.is_number()) {
        throw ContractViolation("distribution weight for '" + bits + "' must be a number");
      }
      experiment.true_distribution.emplace_back(bits, weight.get<double>());
    }
  }
  return experiment;
}

}  // namespace qmit
