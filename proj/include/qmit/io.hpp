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

#ifndef QMIT_IO_HPP
#define QMIT_IO_HPP

#include <string>
#include <vector>

#include <json.hpp>

#include "qmit/bayes.hpp"
#include "qmit/calibration.hpp"
#include "qmit/noise_model.hpp"
#include "qmit/simulator.hpp"
#include "qmit/tally.hpp"

namespace qmit {

// File formats. JSON documents carry a "schema" tag ("qmit-detector/1",
// "qmit-result/1", ...); shot and calibration data are JSONL, one record per
// line. Unreadable files raise ResourceError; malformed content raises
// ContractViolation naming the offending line or field.

nlohmann::json load_json_file(const std::string &path);
void save_json_file(const std::string &path, const nlohmann::json &j);

// Canonical byte layout for every JSON file this library writes: 2-space
// indent, sorted object keys (nlohmann's default map ordering), trailing
// newline. Result files produced from identical runs are byte-identical.
std::string dump_json(const nlohmann::json &j);

// Detector model: {"schema", "mode", "qubits": [...]} where each qubit entry
// is {"qubit_id", "matrix": [[..],[..]]} in binary mode or
// {"qubit_id", "bin_edges", "lambda"} in analog mode.
nlohmann::json model_to_json(const MultiQubitNoiseModel &model);
MultiQubitNoiseModel model_from_json(const nlohmann::json &j);

// Shots: one object per line, {"bits": "0101", "count": n} (count optional,
// default 1) or {"q": [..]} for analog records.
void save_shots_jsonl(const std::string &path, const std::vector<ShotRecord> &shots);
std::vector<ShotRecord> load_shots_jsonl(const std::string &path);

// Calibration data: one {"qubit_id", "prepared_state", "samples": [..]}
// object per line.
void save_calibration_jsonl(const std::string &path,
                            const std::vector<CalibrationRecord> &records);
std::vector<CalibrationRecord> load_calibration_jsonl(const std::string &path);

// Mitigation result: populations keyed by string, sweep count, convergence
// flag, the TV/active-size traces, and the config that produced it. Wall
// times are deliberately excluded so equivalent runs serialize identically;
// timing lives in the run manifest instead.
nlohmann::json result_to_json(const MitigationResult &result, const MitigationConfig &config);

// Simulator inputs: {"schema": "qmit-detector-spec/1", "qubits": [{"mu0",
// "mu1", "sigma", "threshold"?}]} and {"schema": "qmit-experiment/1", "mode",
// "n_shots", "seed", "true_bits" | "true_distribution"}.
nlohmann::json detector_spec_to_json(const DetectorSpec &spec);
DetectorSpec detector_spec_from_json(const nlohmann::json &j);
nlohmann::json experiment_to_json(const ExperimentSpec &experiment);
ExperimentSpec experiment_from_json(const nlohmann::json &j);

}  // namespace qmit

#endif  // QMIT_IO_HPP
