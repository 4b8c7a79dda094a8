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

#ifndef QMIT_METRICS_HPP
#define QMIT_METRICS_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace qmit {

// Compensated (Neumaier) summation. Exact to one final rounding for the
// magnitudes that occur here; used wherever a sum feeds a tolerance check.
double neumaier_sum(const std::vector<double> &values);

// Total variation distance 0.5 * sum_i |p_i - q_i| between two vectors of
// the same length. Inputs are not required to be normalized; the caller owns
// that invariant.
double total_variation(const std::vector<double> &p, const std::vector<double> &q);

// Total variation distance between two sparsely keyed distributions. Keys
// missing from one side contribute their full mass from the other.
double total_variation(const std::map<std::string, double> &p,
                       const std::map<std::string, double> &q);

// One sweep of the pairwise updater, as observed from outside.
struct SweepRecord {
  int sweep = 0;              // 1-based sweep index
  double tv_change = 0.0;     // TV distance between populations before/after
  size_t active_strings = 0;  // support size after pruning
  double seconds = 0.0;       // wall time of this sweep
};

// Full convergence history of one mitigation run.
struct ConvergenceTrace {
  std::vector<SweepRecord> sweeps;
  bool converged = false;  // true when the final sweep moved less than epsilon
  double epsilon = 0.0;    // threshold the run was checked against
};

}  // namespace qmit

#endif  // QMIT_METRICS_HPP
