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

#include "qmit/baselines.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <string>

#include "qmit/errors.hpp"
#include "qmit/metrics.hpp"

namespace qmit {

namespace {

// Dense response matrix over the observed support: lam[i * m + j] is the
// probability of observing group i's outcome when string j is the truth.
std::vector<double> response_matrix(const OutcomeTally &tally, const MultiQubitNoiseModel &model) {
  size_t g = tally.group_count();
  size_t m = tally.string_count();
  std::vector<double> lam(g * m);
  for (size_t i = 0; i < g; i++) {
    for (size_t j = 0; j < m; j++) {
      lam[i * m + j] = likelihood_entry(model, tally.groups[i].key, tally.strings[j]);
    }
  }
  return lam;
}

void check_binary_inputs(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                         const char *op) {
  if (tally.mode != Mode::binary || model.mode() != Mode::binary) {
    throw ContractViolation(std::string(op) +
                            " requires binary-mode data; threshold analog data first");
  }
  if (model.n_qubits() != tally.n_qubits) {
    throw ContractViolation(std::string(op) + " got a " + std::to_string(model.n_qubits()) +
                            "-qubit model for a " + std::to_string(tally.n_qubits) +
                            "-qubit tally");
  }
  if (tally.group_count() == 0) {
    throw ContractViolation(std::string(op) + " requires a nonempty tally");
  }
}

}  // namespace

void IbuConfig::validate() const {
  if (iterations < 0) {
    throw ContractViolation("ibu iterations must be nonnegative, got " +
                            std::to_string(iterations));
  }
}

IbuConfig::Start ibu_start_from_string(const std::string &name) {
  if (name == "uniform") {
    return IbuConfig::Start::uniform;
  }
  if (name == "empirical") {
    return IbuConfig::Start::empirical;
  }
  throw ContractViolation("unknown ibu start '" + name + "'; expected uniform or empirical");
}

std::string to_string(IbuConfig::Start start) {
  return start == IbuConfig::Start::uniform ? "uniform" : "empirical";
}

std::vector<double> ibu(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                        const IbuConfig &config) {
  config.validate();
  check_binary_inputs(tally, model, "ibu");

  size_t g = tally.group_count();
  size_t m = tally.string_count();
  std::vector<double> lam = response_matrix(tally, model);
  std::vector<double> observed = empirical_frequencies(tally);

  std::vector<double> rho(m);
  if (config.start == IbuConfig::Start::uniform) {
    std::fill(rho.begin(), rho.end(), 1.0 / static_cast<double>(m));
  } else {
    rho = observed;
  }

  std::vector<double> denom(g);
  std::vector<double> next(m);
  for (int it = 0; it < config.iterations; it++) {
    for (size_t i = 0; i < g; i++) {
      const double *row = lam.data() + i * m;
      double d = 0.0;
      for (size_t j = 0; j < m; j++) {
        d += row[j] * rho[j];
      }
      if (!(d > 0.0)) {
        throw DegenerateCalibration(
            "ibu predicted zero probability for an observed outcome at iteration " +
            std::to_string(it + 1));
      }
      denom[i] = d;
    }
    std::fill(next.begin(), next.end(), 0.0);
    for (size_t i = 0; i < g; i++) {
      const double *row = lam.data() + i * m;
      double scale = observed[i] / denom[i];
      for (size_t j = 0; j < m; j++) {
        next[j] += row[j] * scale;
      }
    }
    for (size_t j = 0; j < m; j++) {
      next[j] *= rho[j];
    }
    // Renormalize every iteration so each iterate is itself a distribution.
    double sum = neumaier_sum(next);
    if (!(sum > 0.0)) {
      throw DegenerateCalibration("ibu iterate lost all mass at iteration " +
                                  std::to_string(it + 1));
    }
    for (size_t j = 0; j < m; j++) {
      rho[j] = next[j] / sum;
    }
  }
  return rho;
}

std::vector<double> mim(const OutcomeTally &tally, const MultiQubitNoiseModel &model) {
  check_binary_inputs(tally, model, "mim");

  int n_q = model.n_qubits();
  // inv[q] holds the per-qubit inverse confusion matrix in [true][assigned]
  // layout, so the tensor product below applies the full inverse directly.
  std::vector<std::array<std::array<double, 2>, 2>> inv(static_cast<size_t>(n_q));
  for (int q = 0; q < n_q; q++) {
    const SingleQubitConfusion &c = model.confusion(q);
    double det = c(0, 0) * c(1, 1) - c(0, 1) * c(1, 0);
    if (std::abs(det) <= 1e-9) {
      throw SingularMatrix("confusion matrix for qubit " + std::to_string(q) +
                           " is singular (|det| = " + std::to_string(std::abs(det)) + ")");
    }
    inv[q][0][0] = c(1, 1) / det;
    inv[q][0][1] = -c(0, 1) / det;
    inv[q][1][0] = -c(1, 0) / det;
    inv[q][1][1] = c(0, 0) / det;
  }

  size_t g = tally.group_count();
  size_t m = tally.string_count();
  std::vector<double> observed = empirical_frequencies(tally);
  std::vector<OutcomeKey> true_keys(m);
  for (size_t j = 0; j < m; j++) {
    true_keys[j] = key_from_bits(tally.strings[j]);
  }

  std::vector<double> v(m, 0.0);
  for (size_t j = 0; j < m; j++) {
    double acc = 0.0;
    for (size_t i = 0; i < g; i++) {
      // Entry (j, i) of the inverse is the product of per-qubit inverse
      // entries; the tensor product is never materialized.
      double w = 1.0;
      const OutcomeKey &assigned = tally.groups[i].key;
      for (int q = 0; q < n_q; q++) {
        w *= inv[q][true_keys[j][q]][assigned[q]];
      }
      acc += w * observed[i];
    }
    v[j] = acc;
  }
  return project_simplex(v);
}

std::vector<double> project_simplex(const std::vector<double> &v) {
  if (v.empty()) {
    throw ContractViolation("project_simplex requires a nonempty vector");
  }
  bool feasible = true;
  for (double x : v) {
    if (!std::isfinite(x)) {
      throw ContractViolation("project_simplex requires finite entries");
    }
    if (x < 0.0) {
      feasible = false;
    }
  }
  // A point already on the simplex is its own projection; returning the
  // input untouched keeps that case exact.
  if (feasible && neumaier_sum(v) == 1.0) {
    return v;
  }

  std::vector<double> sorted = v;
  std::sort(sorted.begin(), sorted.end(), std::greater<double>());
  double cumulative = 0.0;
  double shift = 0.0;
  bool found = false;
  for (size_t k = 0; k < sorted.size(); k++) {
    cumulative += sorted[k];
    double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
    if (sorted[k] - candidate > 0.0) {
      shift = candidate;
      found = true;
    }
  }
  if (!found) {
    // All mass concentrates on the largest coordinate only when every prefix
    // fails, which cannot happen for finite input; guard anyway.
    throw InternalConsistencyError("simplex projection found no active set");
  }
  std::vector<double> out(v.size());
  for (size_t i = 0; i < v.size(); i++) {
    out[i] = std::max(v[i] - shift, 0.0);
  }
  return out;
}

}  // namespace qmit
