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

#ifndef QMIT_NOISE_MODEL_HPP
#define QMIT_NOISE_MODEL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qmit {

// Tolerance for "columns/rows sum to one" checks on stochastic objects.
inline constexpr double kStochasticTol = 1e-12;

enum class Mode { binary, analog };

const char *to_string(Mode mode);
Mode mode_from_string(const std::string &name);

// One observed readout per qubit, reduced to a small integer: the assigned
// bit in binary mode, or the bin index of the analog signal in analog mode.
using OutcomeKey = std::vector<uint8_t>;

OutcomeKey key_from_bits(const std::string &bits);
std::string bits_from_key(const OutcomeKey &key);

// 2x2 column-stochastic assignment-error matrix for one qubit.
// p[a][t] is the probability of assigning outcome `a` given true state `t`,
// so each column sums to one.
struct SingleQubitConfusion {
  std::array<std::array<double, 2>, 2> p{{{1.0, 0.0}, {0.0, 1.0}}};

  double operator()(int assigned, int truth) const { return p[assigned][truth]; }

  // Throws ContractViolation unless both columns are probability vectors.
  void validate() const;

  static SingleQubitConfusion identity() { return SingleQubitConfusion{}; }
};

// Binned detector response of one qubit along the integrated quadrature
// axis. lambda[t][b] is the probability that state `t` produces a signal in
// bin `b`, so each of the two rows sums to one. Bins are the half-open
// intervals [bin_edges[b], bin_edges[b+1]); signals outside the outermost
// edges are clamped into the first or last bin.
struct ResponseFunction {
  std::vector<double> bin_edges;                 // n_bin + 1, strictly increasing
  std::array<std::vector<double>, 2> lambda;     // 2 rows of n_bin entries each

  int n_bin() const { return static_cast<int>(bin_edges.size()) - 1; }

  void validate() const;
};

// Maps an analog signal to its bin. The contract is defined by the stored
// edge array, not by bin-width arithmetic: the result is the unique b with
// bin_edges[b] <= q < bin_edges[b+1], clamped to [0, n_bin-1] outside the
// covered range.
int bin_index(const ResponseFunction &rf, double q_value);

// Collapses a binned response to a 2x2 confusion matrix by thresholding at
// `threshold`, which must be one of the interior bin edges: bins at or above
// the threshold are assigned outcome 1.
SingleQubitConfusion confusion_from_response(const ResponseFunction &rf, double threshold);

// Tensor-product readout noise model over n_qubits independent detectors.
// The full 2^n confusion matrix is never materialized; entries are evaluated
// lazily through likelihood_entry().
class MultiQubitNoiseModel {
 public:
  static MultiQubitNoiseModel from_confusions(std::vector<SingleQubitConfusion> qubits);
  static MultiQubitNoiseModel from_responses(std::vector<ResponseFunction> qubits);

  Mode mode() const { return mode_; }
  int n_qubits() const;

  const SingleQubitConfusion &confusion(int qubit) const;
  const ResponseFunction &response(int qubit) const;
  const std::vector<SingleQubitConfusion> &confusions() const { return conf_; }
  const std::vector<ResponseFunction> &responses() const { return resp_; }

  // Index of the median interior edge of qubit `q`, i.e. n_bin / 2. This is
  // the edge used when analog outcomes have to be collapsed to bits.
  int median_edge_index(int qubit) const;

  // Binary view of an analog model, thresholding every qubit at its median
  // interior bin edge. Calling this on a binary model is a contract error.
  MultiQubitNoiseModel thresholded() const;

 private:
  MultiQubitNoiseModel() = default;
  Mode mode_ = Mode::binary;
  std::vector<SingleQubitConfusion> conf_;
  std::vector<ResponseFunction> resp_;
};

// Probability of observing `outcome` (bits or bin indices, depending on the
// model's mode) given that the device was in computational basis state
// `true_bits`. Factorizes over qubits; cost is O(n_qubits).
double likelihood_entry(const MultiQubitNoiseModel &model, const OutcomeKey &outcome,
                        const std::string &true_bits);

}  // namespace qmit

#endif  // QMIT_NOISE_MODEL_HPP
