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

// qmit: calibrate / simulate / mitigate / compare / report front end.
// All randomness flows through seeds in the input spec files; the tool never
// draws entropy itself, so every run is replayable. Each output file is
// accompanied by <output>.manifest.json recording the resolved configuration.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmit/baselines.hpp"
#include "qmit/bayes.hpp"
#include "qmit/calibration.hpp"
#include "qmit/errors.hpp"
#include "qmit/io.hpp"
#include "qmit/metrics.hpp"
#include "qmit/noise_model.hpp"
#include "qmit/simulator.hpp"
#include "qmit/tally.hpp"
#include "qmit/version.hpp"

namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int resolve_threads(int flag_value) {
  if (flag_value >= 1) {
    return flag_value;
  }
  if (const char *env = std::getenv("QMIT_THREADS")) {
    int parsed = std::atoi(env);
    if (parsed >= 1) {
      return parsed;
    }
  }
  return 1;
}

void write_manifest(const std::string &out_path, const std::string &subcommand,
                    const std::vector<std::string> &argv, const json &config,
                    const std::vector<std::string> &inputs, const json &seed,
                    double wall_seconds) {
  json manifest = {{"schema", "qmit-manifest/1"},
                   {"version", qmit::kVersion},
                   {"subcommand", subcommand},
                   {"argv", argv},
                   {"config", config},
                   {"inputs", inputs},
                   {"outputs", {out_path}},
                   {"seed", seed},
                   {"wall_seconds", wall_seconds}};
  qmit::save_json_file(out_path + ".manifest.json", manifest);
}

std::string format_double(double value) {
  std::ostringstream out;
  out << std::setprecision(17) << value;
  return out.str();
}

struct CalibrateArgs {
  std::string mode = "binary";
  int n_bin = 2;
  std::string in_path;
  std::string out_path;
  int threads = 0;
};

void run_calibrate(const CalibrateArgs &args, const std::vector<std::string> &argv) {
  auto start = std::chrono::steady_clock::now();
  qmit::Mode mode = qmit::mode_from_string(args.mode);
  std::vector<qmit::CalibrationRecord> records = qmit::load_calibration_jsonl(args.in_path);

  // Pair up prepare-0 / prepare-1 records per qubit; ids must be 0..n-1.
  std::map<std::pair<int, int>, const qmit::CalibrationRecord *> by_key;
  int n_qubits = 0;
  for (const auto &rec : records) {
    if (!by_key.emplace(std::make_pair(rec.qubit_id, rec.prepared_state), &rec).second) {
      throw qmit::ContractViolation("duplicate calibration record for qubit " +
                                    std::to_string(rec.qubit_id) + " state " +
                                    std::to_string(rec.prepared_state));
    }
    n_qubits = std::max(n_qubits, rec.qubit_id + 1);
  }
  auto record_for = [&](int q, int p) -> const qmit::CalibrationRecord & {
    auto it = by_key.find({q, p});
    if (it == by_key.end()) {
      throw qmit::ContractViolation("missing calibration record for qubit " + std::to_string(q) +
                                    " state " + std::to_string(p));
    }
    return *it->second;
  };

  qmit::MultiQubitNoiseModel model = [&] {
    if (mode == qmit::Mode::binary) {
      std::vector<qmit::SingleQubitConfusion> conf;
      conf.reserve(static_cast<size_t>(n_qubits));
      for (int q = 0; q < n_qubits; q++) {
        conf.push_back(qmit::calibrate_binary(record_for(q, 0), record_for(q, 1)));
      }
      return qmit::MultiQubitNoiseModel::from_confusions(std::move(conf));
    }
    std::vector<qmit::ResponseFunction> resp;
    resp.reserve(static_cast<size_t>(n_qubits));
    for (int q = 0; q < n_qubits; q++) {
      resp.push_back(qmit::calibrate_analog(record_for(q, 0), record_for(q, 1), args.n_bin));
    }
    return qmit::MultiQubitNoiseModel::from_responses(std::move(resp));
  }();

  qmit::save_json_file(args.out_path, qmit::model_to_json(model));
  json config = {{"mode", args.mode},
                 {"n_bin", args.n_bin},
                 {"threads", resolve_threads(args.threads)}};
  write_manifest(args.out_path, "calibrate", argv, config, {args.in_path}, nullptr,
                 seconds_since(start));
}

struct SimulateArgs {
  std::string spec_path;
  std::string detector_spec_path;
  std::string out_path;
  uint64_t calibration_per_state = 0;
  int threads = 0;
};

void run_simulate(const SimulateArgs &args, const std::vector<std::string> &argv) {
  auto start = std::chrono::steady_clock::now();
  qmit::ExperimentSpec experiment =
      qmit::experiment_from_json(qmit::load_json_file(args.spec_path));
  qmit::DetectorSpec detector =
      qmit::detector_spec_from_json(qmit::load_json_file(args.detector_spec_path));
  int threads = resolve_threads(args.threads);

  if (args.calibration_per_state > 0) {
    // Calibration data generation: per (qubit, prepared state) records with
    // the experiment's mode and seed, on RNG streams disjoint from shots.
    std::vector<qmit::CalibrationRecord> records;
    records.reserve(static_cast<size_t>(detector.n_qubits()) * 2);
    for (int q = 0; q < detector.n_qubits(); q++) {
      for (int p = 0; p < 2; p++) {
        records.push_back(qmit::sample_calibration_record(
            detector, q, p, args.calibration_per_state, experiment.seed, experiment.mode));
      }
    }
    qmit::save_calibration_jsonl(args.out_path, records);
  } else {
    std::vector<qmit::ShotRecord> shots = qmit::sample_shots(experiment, detector, threads);
    qmit::save_shots_jsonl(args.out_path, shots);
  }

  json config = qmit::experiment_to_json(experiment);
  config["calibration_per_state"] = args.calibration_per_state;
  config["threads"] = threads;
  write_manifest(args.out_path, "simulate", argv, config,
                 {args.spec_path, args.detector_spec_path}, experiment.seed,
                 seconds_since(start));
}

struct MitigateArgs {
  std::string detector_path;
  std::string shots_path;
  std::string out_path;
  qmit::MitigationConfig config;
  std::string estimator = "argmax";
  uint64_t memory_budget_mb = 4096;
  int threads = 0;
};

json mitigation_config_json(const qmit::MitigationConfig &cfg, int threads) {
  return {{"n_p", cfg.n_p},
          {"epsilon", cfg.epsilon},
          {"max_sweeps", cfg.max_sweeps},
          {"estimator", qmit::to_string(cfg.estimator)},
          {"likelihood_floor", cfg.likelihood_floor},
          {"memory_budget_bytes", cfg.memory_budget_bytes},
          {"record_pair_trace", cfg.record_pair_trace},
          {"check_invariants", cfg.check_invariants},
          {"threads", threads}};
}

void run_mitigate(const MitigateArgs &args, const std::vector<std::string> &argv) {
  auto start = std::chrono::steady_clock::now();
  qmit::MitigationConfig cfg = args.config;
  cfg.estimator = qmit::estimator_from_string(args.estimator);
  cfg.memory_budget_bytes = args.memory_budget_mb << 20;
  cfg.validate();
  int threads = resolve_threads(args.threads);

  qmit::MultiQubitNoiseModel model =
      qmit::model_from_json(qmit::load_json_file(args.detector_path));
  std::vector<qmit::ShotRecord> shots = qmit::load_shots_jsonl(args.shots_path);
  qmit::OutcomeTally tally = qmit::tally_shots(shots, model, threads);
  qmit::MitigationResult result = qmit::mitigate(tally, model, cfg);

  qmit::save_json_file(args.out_path, qmit::result_to_json(result, cfg));
  write_manifest(args.out_path, "mitigate", argv, mitigation_config_json(cfg, threads),
                 {args.detector_path, args.shots_path}, nullptr, seconds_since(start));
}

struct CompareArgs {
  std::string methods = "bayes,ibu,mim";
  std::string detector_path;
  std::string shots_path;
  std::string target;
  std::string out_path;
  qmit::MitigationConfig config;
  std::string estimator = "argmax";
  int ibu_iterations = 100;
  std::string ibu_start = "uniform";
  int threads = 0;
};

void run_compare(const CompareArgs &args, const std::vector<std::string> &argv) {
  auto start = std::chrono::steady_clock::now();
  qmit::MitigationConfig cfg = args.config;
  cfg.estimator = qmit::estimator_from_string(args.estimator);
  cfg.validate();
  qmit::IbuConfig ibu_cfg;
  ibu_cfg.iterations = args.ibu_iterations;
  ibu_cfg.start = qmit::ibu_start_from_string(args.ibu_start);
  ibu_cfg.validate();
  int threads = resolve_threads(args.threads);

  std::vector<std::string> methods;
  for (std::stringstream ss(args.methods); ss.good();) {
    std::string method;
    std::getline(ss, method, ',');
    if (method != "bayes" && method != "ibu" && method != "mim") {
      throw qmit::ContractViolation("unknown method '" + method +
                                    "'; expected bayes, ibu, or mim");
    }
    methods.push_back(method);
  }

  qmit::MultiQubitNoiseModel model =
      qmit::model_from_json(qmit::load_json_file(args.detector_path));
  std::vector<qmit::ShotRecord> shots = qmit::load_shots_jsonl(args.shots_path);
  qmit::OutcomeTally tally = qmit::tally_shots(shots, model, threads);

  // The reference unfolders operate on bits; analog data is reduced to its
  // thresholded binary view for them while the pairwise method keeps bins.
  qmit::MultiQubitNoiseModel binary_model =
      model.mode() == qmit::Mode::analog ? model.thresholded() : model;
  qmit::OutcomeTally binary_tally =
      model.mode() == qmit::Mode::analog
          ? qmit::tally_shots(qmit::threshold_shots(shots, model), binary_model, threads)
          : tally;

  std::ofstream out(args.out_path);
  if (!out) {
    throw qmit::ResourceError("cannot open '" + args.out_path + "' for writing");
  }
  out << "method,target,success_probability,seconds\n";
  for (const std::string &method : methods) {
    auto method_start = std::chrono::steady_clock::now();
    double success = 0.0;
    if (method == "bayes") {
      qmit::MitigationResult result = qmit::mitigate(tally, model, cfg);
      success = qmit::success_probability(result.strings, result.populations, args.target);
    } else if (method == "ibu") {
      std::vector<double> rho = qmit::ibu(binary_tally, binary_model, ibu_cfg);
      success = qmit::success_probability(binary_tally.strings, rho, args.target);
    } else {
      std::vector<double> rho = qmit::mim(binary_tally, binary_model);
      success = qmit::success_probability(binary_tally.strings, rho, args.target);
    }
    out << method << "," << args.target << "," << format_double(success) << ","
        << format_double(seconds_since(method_start)) << "\n";
  }
  if (!out) {
    throw qmit::ResourceError("failed writing '" + args.out_path + "'");
  }
  out.close();

  json config = mitigation_config_json(cfg, threads);
  config["methods"] = args.methods;
  config["target"] = args.target;
  config["ibu_iterations"] = args.ibu_iterations;
  config["ibu_start"] = args.ibu_start;
  write_manifest(args.out_path, "compare", argv, config,
                 {args.detector_path, args.shots_path}, nullptr, seconds_since(start));
}

struct ReportArgs {
  std::string result_path;
  std::string out_path;
};

void run_report(const ReportArgs &args, const std::vector<std::string> &argv) {
  auto start = std::chrono::steady_clock::now();
  json result = qmit::load_json_file(args.result_path);
  if (result.value("schema", std::string()) != "qmit-result/1") {
    throw qmit::ContractViolation("'" + args.result_path + "' is not a result file");
  }
  const json &tv = result.at("tv_trace");
  const json &active = result.at("active_trace");
  if (!tv.is_array() || !active.is_array() || tv.size() != active.size()) {
    throw qmit::ContractViolation("'" + args.result_path + "' has inconsistent traces");
  }

  std::ofstream out(args.out_path);
  if (!out) {
    throw qmit::ResourceError("cannot open '" + args.out_path + "' for writing");
  }
  out << "sweep,tv_change,active_strings\n";
  for (size_t k = 0; k < tv.size(); k++) {
    out << (k + 1) << "," << format_double(tv[k].get<double>()) << ","
        << active[k].get<uint64_t>() << "\n";
  }
  if (!out) {
    throw qmit::ResourceError("failed writing '" + args.out_path + "'");
  }
  out.close();
  write_manifest(args.out_path, "report", argv, json::object(), {args.result_path}, nullptr,
                 seconds_since(start));
}

}  // namespace

int main(int argc, char **argv) {
  std::vector<std::string> argv_copy(argv, argv + argc);
  bool json_errors = false;

  CLI::App app{"Readout error mitigation for multi-qubit measurements"};
  app.set_version_flag("--version", qmit::kVersion);
  app.add_flag("--json-errors", json_errors,
               "print errors to stderr as machine-readable JSON");
  app.require_subcommand(1);

  CalibrateArgs cal;
  CLI::App *calibrate = app.add_subcommand(
      "calibrate", "estimate a detector model from calibration records");
  calibrate->add_option("--mode", cal.mode, "binary or analog")->required();
  calibrate->add_option("--n-bin", cal.n_bin, "bins per qubit (analog mode)");
  calibrate->add_option("--in", cal.in_path, "calibration JSONL")->required();
  calibrate->add_option("--out", cal.out_path, "detector JSON to write")->required();
  calibrate->add_option("--threads", cal.threads, "worker cap (QMIT_THREADS fallback)");
  calibrate->callback([&] { run_calibrate(cal, argv_copy); });

  SimulateArgs sim;
  CLI::App *simulate = app.add_subcommand(
      "simulate", "draw shot or calibration records from a detector spec");
  simulate->add_option("--spec", sim.spec_path, "experiment JSON")->required();
  simulate->add_option("--detector-spec", sim.detector_spec_path, "detector spec JSON")
      ->required();
  simulate->add_option("--out", sim.out_path, "shot JSONL to write")->required();
  simulate->add_option("--calibration-per-state", sim.calibration_per_state,
                       "emit calibration records with this many shots per prepared state "
                       "instead of experiment shots");
  simulate->add_option("--threads", sim.threads, "worker cap (QMIT_THREADS fallback)");
  simulate->callback([&] { run_simulate(sim, argv_copy); });

  MitigateArgs mit;
  CLI::App *mitigate = app.add_subcommand("mitigate", "run pairwise mitigation on shot data");
  mitigate->add_option("--detector", mit.detector_path, "detector JSON")->required();
  mitigate->add_option("--shots", mit.shots_path, "shot JSONL")->required();
  mitigate->add_option("--out", mit.out_path, "result JSON to write")->required();
  mitigate->add_option("--n-p", mit.config.n_p, "pair posterior grid points");
  mitigate->add_option("--epsilon", mit.config.epsilon, "sweep TV exit threshold");
  mitigate->add_option("--max-sweeps", mit.config.max_sweeps, "sweep cap");
  mitigate->add_option("--estimator", mit.estimator, "argmax or mean");
  mitigate->add_flag("--record-pair-trace", mit.config.record_pair_trace,
                     "record per-pair TV deltas");
  mitigate->add_flag("--check-invariants", mit.config.check_invariants,
                     "verify normalization after every pair update");
  mitigate->add_option("--memory-budget-mb", mit.memory_budget_mb,
                       "likelihood cache budget in MiB");
  mitigate->add_option("--threads", mit.threads, "worker cap (QMIT_THREADS fallback)");
  mitigate->callback([&] { run_mitigate(mit, argv_copy); });

  CompareArgs cmp;
  CLI::App *compare = app.add_subcommand("compare", "run several mitigators on one dataset");
  compare->add_option("--methods", cmp.methods, "comma list of bayes,ibu,mim");
  compare->add_option("--detector", cmp.detector_path, "detector JSON")->required();
  compare->add_option("--shots", cmp.shots_path, "shot JSONL")->required();
  compare->add_option("--target", cmp.target, "true bitstring to score against")->required();
  compare->add_option("--out", cmp.out_path, "CSV to write")->required();
  compare->add_option("--n-p", cmp.config.n_p, "pair posterior grid points");
  compare->add_option("--epsilon", cmp.config.epsilon, "sweep TV exit threshold");
  compare->add_option("--max-sweeps", cmp.config.max_sweeps, "sweep cap");
  compare->add_option("--estimator", cmp.estimator, "argmax or mean");
  compare->add_option("--ibu-iterations", cmp.ibu_iterations, "ibu iteration count");
  compare->add_option("--ibu-start", cmp.ibu_start, "ibu start: uniform or empirical");
  compare->add_option("--threads", cmp.threads, "worker cap (QMIT_THREADS fallback)");
  compare->callback([&] { run_compare(cmp, argv_copy); });

  ReportArgs rep;
  CLI::App *report = app.add_subcommand("report", "render a result trace to CSV");
  report->add_option("--result", rep.result_path, "result JSON")->required();
  report->add_option("--out", rep.out_path, "CSV to write")->required();
  report->callback([&] { run_report(rep, argv_copy); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    // Usage problems are contract errors (exit 1); --help/--version exit 0.
    return code == 0 ? 0 : 1;
  } catch (const qmit::Error &e) {
    if (json_errors) {
      std::cerr << json({{"error", e.kind()}, {"message", e.what()}}).dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return e.exit_code();
  } catch (const std::exception &e) {
    if (json_errors) {
      std::cerr << json({{"error", "internal"}, {"message", e.what()}}).dump() << "\n";
    } else {
      std::cerr << "error: " << e.what() << "\n";
    }
    return 1;
  }
  return 0;
}
