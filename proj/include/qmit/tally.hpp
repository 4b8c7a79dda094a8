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

#ifndef QMIT_TALLY_HPP
#define QMIT_TALLY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qmit/noise_model.hpp"

namespace qmit {

// One measured shot. Exactly one of `bits` / `q` is populated, matching the
// run's mode. `count` is a repetition shortcut for pre-grouped binary data;
// analog shots must keep count == 1 (real-valued outcomes do not group).
struct ShotRecord {
  std::string bits;       // binary mode: assigned bits, one char per qubit
  std::vector<double> q;  // analog mode: integrated quadrature per qubit
  uint64_t count = 1;

  bool is_analog() const { return !q.empty(); }
};

// One distinct outcome after grouping: a key and how often it was seen.
struct OutcomeGroup {
  OutcomeKey key;
  uint64_t count = 0;
};

// Shot records grouped by distinct outcome key, plus the induced active
// subspace: the set of observed bitstrings (binary keys directly; analog keys
// thresholded at each qubit's median bin edge). Groups and strings are sorted
// lexicographically, so tallies are canonical: any permutation of the same
// shots produces an identical object.
struct OutcomeTally {
  Mode mode = Mode::binary;
  int n_qubits = 0;
  uint64_t n_shots = 0;
  std::vector<OutcomeGroup> groups;
  std::vector<uint32_t> group_string;   // groups[g] projects to strings[group_string[g]]
  std::vector<std::string> strings;     // active subspace, size M
  std::vector<uint64_t> string_counts;  // shots per active string

  size_t group_count() const { return groups.size(); }
  size_t string_count() const { return strings.size(); }
};

// Groups shots into an OutcomeTally under `model` (whose mode decides how
// shots are read and how analog values are binned). `threads` caps the worker
// count for sharded counting; results are identical for every thread count.
OutcomeTally tally_shots(const std::vector<ShotRecord> &shots, const MultiQubitNoiseModel &model,
                         int threads = 1);

// Per-active-string frequencies count/N. The last entry absorbs the rounding
// so the returned vector sums to 1 exactly.
std::vector<double> empirical_frequencies(const OutcomeTally &tally);

// Converts analog shots to binary ones by thresholding each qubit's value at
// its median bin edge under `model` (which must be analog). Together with
// MultiQubitNoiseModel::thresholded() this reduces an analog dataset to the
// equivalent binary one.
std::vector<ShotRecord> threshold_shots(const std::vector<ShotRecord> &shots,
                                        const MultiQubitNoiseModel &model);

}  // namespace qmit

#endif  // QMIT_TALLY_HPP
