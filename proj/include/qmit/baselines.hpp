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

#ifndef QMIT_BASELINES_HPP
#define QMIT_BASELINES_HPP

#include <string>
#include <vector>

#include "qmit/noise_model.hpp"
#include "qmit/tally.hpp"

namespace qmit {

// Reference unfolding methods the pairwise mitigator is compared against.
// Both operate on binary tallies; analog data must be thresholded first.

struct IbuConfig {
  enum class Start { uniform, empirical };
  int iterations = 100;
  Start start = Start::uniform;

  void validate() const;
};

IbuConfig::Start ibu_start_from_string(const std::string &name);
std::string to_string(IbuConfig::Start start);

// Iterative Bayesian unfolding over the observed strings. Populations are
// supported on the tally's strings (in tally order); each iteration is
// renormalized, so every iterate is a distribution.
std::vector<double> ibu(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                        const IbuConfig &config = IbuConfig{});

// Matrix-inversion mitigation: applies the tensor product of per-qubit 2x2
// confusion inverses to the empirical frequencies, then projects the result
// onto the probability simplex. Values are reported per observed string, in
// tally order. Throws SingularMatrix (naming the qubit) when any per-qubit
// confusion matrix has |det| <= 1e-9.
std::vector<double> mim(const OutcomeTally &tally, const MultiQubitNoiseModel &model);

// Euclidean projection onto the probability simplex by sort and threshold.
// A vector that is already nonnegative with exact unit sum is returned
// unchanged; otherwise the output sums to one up to accumulated rounding of
// the shift, never worse than a few ulps.
std::vector<double> project_simplex(const std::vector<double> &v);

}  // namespace qmit

#endif  // QMIT_BASELINES_HPP
