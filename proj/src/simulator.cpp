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

#include "qmit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "qmit/errors.hpp"
#include "qmit/rng.hpp"

namespace qmit {

namespace {

// Disjoint Philox stream ids. Calibration draws never collide with
// experiment draws, and state draws never collide with signal draws.
constexpr uint32_t kStreamState = 0;
constexpr uint32_t kStreamSignal = 1;
constexpr uint32_t kStreamCalibration = 2;  // + prepared_state

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

void check_bits(const std::string &bits, int n_qubits, const char *what) {
  if (static_cast<int>(bits.size()) != n_qubits) {
    throw ContractViolation(std::string(what) + " '" + bits + "' must have " +
                            std::to_string(n_qubits) + " characters");
  }
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw ContractViolation(std::string(what) + " '" + bits + "' must contain only 0 and 1");
    }
  }
}

}  // namespace

double DetectorQubit::effective_threshold() const {
  return std::isnan(threshold) ? 0.5 * (mu0 + mu1) : threshold;
}

void DetectorQubit::validate(int qubit) const {
  if (!std::isfinite(mu0) || !std::isfinite(mu1) || mu0 == mu1) {
    throw ContractViolation("detector qubit " + std::to_string(qubit) +
                            " needs distinct finite state means");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ContractViolation("detector qubit " + std::to_string(qubit) +
                            " needs a positive finite sigma, got " + std::to_string(sigma));
  }
  if (!std::isnan(threshold) && !std::isfinite(threshold)) {
    throw ContractViolation("detector qubit " + std::to_string(qubit) +
                            " has a non-finite threshold");
  }
}

void DetectorSpec::validate() const {
  if (qubits.empty()) {
    throw ContractViolation("detector spec needs at least one qubit");
  }
  for (size_t q = 0; q < qubits.size(); q++) {
    qubits[q].validate(static_cast<int>(q));
  }
}

void ExperimentSpec::validate(int n_qubits) const {
  if (n_shots == 0) {
    throw ContractViolation("experiment needs at least one shot");
  }
  bool has_fixed = !true_bits.empty();
  bool has_dist = !true_distribution.empty();
  if (has_fixed == has_dist) {
    throw ContractViolation("experiment needs exactly one of a true string or a distribution");
  }
  if (has_fixed) {
    check_bits(true_bits, n_qubits, "true string");
    return;
  }
  std::set<std::string> seen;
  double sum = 0.0;
  for (const auto &[bits, weight] : true_distribution) {
    check_bits(bits, n_qubits, "distribution string");
    if (!(weight > 0.0) || !std::isfinite(weight)) {
      throw ContractViolation("distribution weight for '" + bits + "' must be positive");
    }
    if (!seen.insert(bits).second) {
      throw ContractViolation("distribution lists '" + bits + "' twice");
    }
    sum += weight;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw ContractViolation("distribution weights sum to " + std::to_string(sum) +
                            ", expected 1");
  }
}

SingleQubitConfusion true_confusion(const DetectorSpec &spec, int qubit) {
  spec.validate();
  if (qubit < 0 || qubit >= spec.n_qubits()) {
    throw ContractViolation("qubit " + std::to_string(qubit) + " out of range");
  }
  const DetectorQubit &d = spec.qubits[static_cast<size_t>(qubit)];
  double thr = d.effective_threshold();
  SingleQubitConfusion c;
  // Assignment is 1 iff the signal is at or above the threshold; the "at"
  // case has measure zero under the Gaussian, so the CDF split is exact.
  c.p[0][0] = normal_cdf((thr - d.mu0) / d.sigma);
  c.p[1][0] = 1.0 - c.p[0][0];
  c.p[0][1] = normal_cdf((thr - d.mu1) / d.sigma);
  c.p[1][1] = 1.0 - c.p[0][1];
  c.validate();
  return c;
}

std::vector<ShotRecord> sample_shots(const ExperimentSpec &experiment, const DetectorSpec &spec,
                                     int threads) {
  spec.validate();
  experiment.validate(spec.n_qubits());
  size_t n_q = spec.qubits.size();
  size_t n_shots = static_cast<size_t>(experiment.n_shots);

  // Cumulative weights for the true-string draw. The final edge is pinned to
  // 1 so a uniform in [0, 1) always lands in some cell.
  std::vector<double> cdf(experiment.true_distribution.size());
  double acc = 0.0;
  for (size_t k = 0; k < cdf.size(); k++) {
    acc += experiment.true_distribution[k].second;
    cdf[k] = acc;
  }
  if (!cdf.empty()) {
    cdf.back() = 1.0;
  }

  std::vector<ShotRecord> shots(n_shots);
  auto fill_range = [&](size_t begin, size_t end) {
    for (size_t s = begin; s < end; s++) {
      const std::string *truth = &experiment.true_bits;
      if (!cdf.empty()) {
        double u = philox_uniform(experiment.seed, s, 0, kStreamState);
        size_t cell = static_cast<size_t>(
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (cell >= cdf.size()) {
          cell = cdf.size() - 1;
        }
        truth = &experiment.true_distribution[cell].first;
      }
      ShotRecord &rec = shots[s];
      if (experiment.mode == Mode::analog) {
        rec.q.resize(n_q);
      } else {
        rec.bits.resize(n_q);
      }
      for (size_t q = 0; q < n_q; q++) {
        const DetectorQubit &d = spec.qubits[q];
        double mu = (*truth)[q] == '1' ? d.mu1 : d.mu0;
        double z = philox_gaussian(experiment.seed, s, static_cast<uint32_t>(q), kStreamSignal);
        double value = mu + d.sigma * z;
        if (experiment.mode == Mode::analog) {
          rec.q[q] = value;
        } else {
          rec.bits[q] = value >= d.effective_threshold() ? '1' : '0';
        }
      }
    }
  };

  size_t n_workers = threads < 1 ? 1 : std::min<size_t>(static_cast<size_t>(threads), n_shots);
  if (n_workers <= 1) {
    fill_range(0, n_shots);
  } else {
    std::vector<std::thread> workers;
    for (size_t w = 0; w < n_workers; w++) {
      size_t begin = n_shots * w / n_workers;
      size_t end = n_shots * (w + 1) / n_workers;
      workers.emplace_back(fill_range, begin, end);
    }
    for (auto &t : workers) {
      t.join();
    }
  }
  return shots;
}

CalibrationRecord sample_calibration_record(const DetectorSpec &spec, int qubit,
                                            int prepared_state, uint64_t n_shots, uint64_t seed,
                                            Mode mode) {
  spec.validate();
  if (qubit < 0 || qubit >= spec.n_qubits()) {
    throw ContractViolation("qubit " + std::to_string(qubit) + " out of range");
  }
  if (prepared_state != 0 && prepared_state != 1) {
    throw ContractViolation("prepared state must be 0 or 1, got " +
                            std::to_string(prepared_state));
  }
  if (n_shots == 0) {
    throw ContractViolation("calibration needs at least one shot");
  }
  const DetectorQubit &d = spec.qubits[static_cast<size_t>(qubit)];
  double mu = prepared_state == 1 ? d.mu1 : d.mu0;
  double thr = d.effective_threshold();

  CalibrationRecord record;
  record.qubit_id = qubit;
  record.prepared_state = prepared_state;
  record.samples.resize(static_cast<size_t>(n_shots));
  for (size_t s = 0; s < record.samples.size(); s++) {
    double z = philox_gaussian(seed, s, static_cast<uint32_t>(qubit),
                               kStreamCalibration + static_cast<uint32_t>(prepared_state));
    double value = mu + d.sigma * z;
    record.samples[s] = mode == Mode::analog ? value : (value >= thr ? 1.0 : 0.0);
  }
  return record;
}

double success_probability(const std::vector<std::string> &strings,
                           const std::vector<double> &populations, const std::string &target) {
  if (strings.size() != populations.size()) {
    throw ContractViolation("success_probability got " + std::to_string(strings.size()) +
                            " strings for " + std::to_string(populations.size()) +
                            " population entries");
  }
  auto it = std::find(strings.begin(), strings.end(), target);
  if (it == strings.end()) {
    return 0.0;
  }
  return populations[static_cast<size_t>(it - strings.begin())];
}

}  // namespace qmit
