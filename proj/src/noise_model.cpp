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

#include "qmit/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "qmit/errors.hpp"

namespace qmit {

const char *to_string(Mode mode) {
  return mode == Mode::binary ? "binary" : "analog";
}

Mode mode_from_string(const std::string &name) {
  if (name == "binary") {
    return Mode::binary;
  }
  if (name == "analog") {
    return Mode::analog;
  }
  throw ContractViolation("unknown mode '" + name + "', expected 'binary' or 'analog'");
}

OutcomeKey key_from_bits(const std::string &bits) {
  OutcomeKey key(bits.size());
  for (size_t q = 0; q < bits.size(); q++) {
    char c = bits[q];
    if (c != '0' && c != '1') {
      throw ContractViolation("bit string '" + bits + "' contains a character other than 0/1");
    }
    key[q] = static_cast<uint8_t>(c - '0');
  }
  return key;
}

std::string bits_from_key(const OutcomeKey &key) {
  std::string bits(key.size(), '0');
  for (size_t q = 0; q < key.size(); q++) {
    if (key[q] > 1) {
      throw ContractViolation("outcome key entry " + std::to_string(key[q]) +
                              " cannot be rendered as a bit");
    }
    bits[q] = static_cast<char>('0' + key[q]);
  }
  return bits;
}

static void check_probability(double value, const char *what) {
  if (!std::isfinite(value) || value < 0.0 || value > 1.0) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s = %.17g is not a probability", what, value);
    throw ContractViolation(buf);
  }
}

void SingleQubitConfusion::validate() const {
  for (int t = 0; t < 2; t++) {
    check_probability(p[0][t], "confusion entry");
    check_probability(p[1][t], "confusion entry");
    double col = p[0][t] + p[1][t];
    if (std::abs(col - 1.0) > kStochasticTol) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "confusion column for true state %d sums to %.17g, expected 1", t, col);
      throw ContractViolation(buf);
    }
  }
}

void ResponseFunction::validate() const {
  if (bin_edges.size() < 2) {
    throw ContractViolation("response function needs at least 2 bin edges");
  }
  for (size_t b = 0; b + 1 < bin_edges.size(); b++) {
    if (!(bin_edges[b] < bin_edges[b + 1])) {
      throw ContractViolation("response bin edges must be strictly increasing");
    }
  }
  size_t bins = bin_edges.size() - 1;
  for (int t = 0; t < 2; t++) {
    if (lambda[t].size() != bins) {
      throw ContractViolation("response row for state " + std::to_string(t) + " has " +
                              std::to_string(lambda[t].size()) + " bins, expected " +
                              std::to_string(bins));
    }
    double row = 0.0;
    for (double v : lambda[t]) {
      check_probability(v, "response bin mass");
      row += v;
    }
    if (std::abs(row - 1.0) > kStochasticTol) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "response row for state %d sums to %.17g, expected 1", t, row);
      throw ContractViolation(buf);
    }
  }
}

int bin_index(const ResponseFunction &rf, double q_value) {
  if (!std::isfinite(q_value)) {
    throw ContractViolation("analog signal is not finite");
  }
  int bins = rf.n_bin();
  // First edge strictly greater than q, so equal edges land in the upper bin.
  auto it = std::upper_bound(rf.bin_edges.begin(), rf.bin_edges.end(), q_value);
  int b = static_cast<int>(it - rf.bin_edges.begin()) - 1;
  return std::clamp(b, 0, bins - 1);
}

SingleQubitConfusion confusion_from_response(const ResponseFunction &rf, double threshold) {
  rf.validate();
  int edge = -1;
  for (size_t b = 1; b + 1 < rf.bin_edges.size(); b++) {
    if (rf.bin_edges[b] == threshold) {
      edge = static_cast<int>(b);
      break;
    }
  }
  if (edge < 0) {
    throw ContractViolation("threshold must coincide with an interior bin edge");
  }
  SingleQubitConfusion c;
  for (int t = 0; t < 2; t++) {
    double above = 0.0;
    for (int b = edge; b < rf.n_bin(); b++) {
      above += rf.lambda[t][b];
    }
    double below = 0.0;
    for (int b = 0; b < edge; b++) {
      below += rf.lambda[t][b];
    }
    c.p[0][t] = below;
    c.p[1][t] = above;
  }
  return c;
}

MultiQubitNoiseModel MultiQubitNoiseModel::from_confusions(
    std::vector<SingleQubitConfusion> qubits) {
  if (qubits.empty()) {
    throw ContractViolation("noise model needs at least one qubit");
  }
  for (const auto &c : qubits) {
    c.validate();
  }
  MultiQubitNoiseModel m;
  m.mode_ = Mode::binary;
  m.conf_ = std::move(qubits);
  return m;
}

MultiQubitNoiseModel MultiQubitNoiseModel::from_responses(std::vector<ResponseFunction> qubits) {
  if (qubits.empty()) {
    throw ContractViolation("noise model needs at least one qubit");
  }
  for (const auto &r : qubits) {
    r.validate();
  }
  MultiQubitNoiseModel m;
  m.mode_ = Mode::analog;
  m.resp_ = std::move(qubits);
  return m;
}

int MultiQubitNoiseModel::n_qubits() const {
  return static_cast<int>(mode_ == Mode::binary ? conf_.size() : resp_.size());
}

const SingleQubitConfusion &MultiQubitNoiseModel::confusion(int qubit) const {
  if (mode_ != Mode::binary) {
    throw ContractViolation("confusion() called on an analog noise model");
  }
  return conf_.at(static_cast<size_t>(qubit));
}

const ResponseFunction &MultiQubitNoiseModel::response(int qubit) const {
  if (mode_ != Mode::analog) {
    throw ContractViolation("response() called on a binary noise model");
  }
  return resp_.at(static_cast<size_t>(qubit));
}

int MultiQubitNoiseModel::median_edge_index(int qubit) const {
  const ResponseFunction &rf = response(qubit);
  return rf.n_bin() / 2;
}

MultiQubitNoiseModel MultiQubitNoiseModel::thresholded() const {
  if (mode_ != Mode::analog) {
    throw ContractViolation("thresholded() called on a model that is already binary");
  }
  std::vector<SingleQubitConfusion> conf;
  conf.reserve(resp_.size());
  for (size_t q = 0; q < resp_.size(); q++) {
    const ResponseFunction &rf = resp_[q];
    conf.push_back(confusion_from_response(rf, rf.bin_edges[static_cast<size_t>(rf.n_bin() / 2)]));
  }
  return from_confusions(std::move(conf));
}

double likelihood_entry(const MultiQubitNoiseModel &model, const OutcomeKey &outcome,
                        const std::string &true_bits) {
  int n = model.n_qubits();
  if (static_cast<int>(outcome.size()) != n || static_cast<int>(true_bits.size()) != n) {
    throw ContractViolation("outcome/true-string width does not match the noise model");
  }
  double value = 1.0;
  if (model.mode() == Mode::binary) {
    for (int q = 0; q < n; q++) {
      int a = outcome[static_cast<size_t>(q)];
      if (a > 1) {
        throw ContractViolation("binary outcome key holds a non-bit entry");
      }
      int t = true_bits[static_cast<size_t>(q)] - '0';
      if (t != 0 && t != 1) {
        throw ContractViolation("true string contains a character other than 0/1");
      }
      value *= model.confusions()[static_cast<size_t>(q)].p[a][t];
    }
  } else {
    for (int q = 0; q < n; q++) {
      const ResponseFunction &rf = model.responses()[static_cast<size_t>(q)];
      int b = outcome[static_cast<size_t>(q)];
      if (b >= rf.n_bin()) {
        throw ContractViolation("analog outcome key holds a bin index out of range");
      }
      int t = true_bits[static_cast<size_t>(q)] - '0';
      if (t != 0 && t != 1) {
        throw ContractViolation("true string contains a character other than 0/1");
      }
      value *= rf.lambda[static_cast<size_t>(t)][static_cast<size_t>(b)];
    }
  }
  return value;
}

}  // namespace qmit
