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

#ifndef QMIT_BAYES_HPP
#define QMIT_BAYES_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmit/metrics.hpp"
#include "qmit/noise_model.hpp"
#include "qmit/tally.hpp"

namespace qmit {

enum class Estimator { argmax, mean };

const char *to_string(Estimator estimator);
Estimator estimator_from_string(const std::string &name);

struct MitigationConfig {
  int n_p = 101;                      // grid points per pair posterior
  double epsilon = 1e-3;              // per-sweep TV exit threshold
  int max_sweeps = 20;
  Estimator estimator = Estimator::argmax;
  double likelihood_floor = 1e-300;   // lower clamp inside the log
  uint64_t memory_budget_bytes = 4ull << 30;  // cap on the likelihood cache
  bool record_pair_trace = false;     // per-pair TV deltas in the result
  bool check_invariants = false;      // verify normalization after every pair update

  void validate() const;
};

// Log-posterior of one population pair along the line rho_i = t,
// rho_j = S - t, t in [0, S], sampled at n_p equally spaced points.
// Values are exact log-likelihoods (uniform prior dropped); the grid is
// always finite thanks to the likelihood floor.
struct PairPosterior {
  size_t i = 0;
  size_t j = 0;
  double budget = 0.0;                // S = R_i + R_j
  std::vector<double> log_posterior;  // n_p values over t = budget * k/(n_p-1)
  size_t argmax_index = 0;            // smallest index on ties
  double mean_t = 0.0;                // posterior mean of t
};

// Mutable engine state for one mitigation run: the active strings, their
// populations, and the cached per-group likelihood table.
struct MitigationState {
  std::vector<std::string> active;  // M bitstrings, lexicographically sorted at start
  std::vector<double> populations;  // R, aligned with active, nonnegative, sums to 1
  std::vector<double> likelihood;   // row-major M x G: likelihood[k*G + g]
  std::vector<double> totals;       // T[g] = sum_k likelihood[k*G+g] * R[k]
  int sweeps = 0;
  ConvergenceTrace trace;
  std::vector<double> pair_tv;      // per-pair TV deltas when recorded

  size_t string_count() const { return active.size(); }
  size_t group_count() const { return totals.size(); }

  // Builds the state from a tally: R from empirical frequencies, the M x G
  // likelihood cache from the model, T from both. Enforces the memory budget
  // and rejects outcome groups with zero likelihood under every string.
  static MitigationState initialize(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                                    const MitigationConfig &cfg);
};

// Posterior of pair (i, j) under the current state, holding every other
// population fixed. Cost Theta(G * n_p) from the cached tables.
PairPosterior pair_log_posterior(const MitigationState &state, size_t i, size_t j,
                                 const MitigationConfig &cfg, const OutcomeTally &tally);

// Reads the point estimate off a pair posterior: the grid argmax (smallest t
// on ties) or the posterior mean. Returns (R_i', R_j') with sum = budget.
std::pair<double, double> estimate_pair(const PairPosterior &posterior, Estimator estimator);

// One full pass over all unordered active pairs, ordered by descending
// population (ties lexicographic), order frozen at entry. Updates R and T
// incrementally, prunes zeroed strings at the end, appends a trace record,
// and returns the TV distance between the populations before and after.
double sweep(MitigationState &state, const MitigationConfig &cfg, const OutcomeTally &tally);

struct MitigationResult {
  std::vector<std::string> strings;
  std::vector<double> populations;
  int sweeps = 0;
  ConvergenceTrace trace;
  std::vector<double> pair_tv;  // empty unless cfg.record_pair_trace
};

// Full mitigation: initialize, sweep until the TV change drops below
// cfg.epsilon or cfg.max_sweeps is hit, return the surviving populations.
MitigationResult mitigate(const OutcomeTally &tally, const MultiQubitNoiseModel &model,
                          const MitigationConfig &cfg);

// Exhaustive grid argmax of the full-dimensional likelihood over the
// (M-1)-simplex. Test oracle only: guarded to M <= 3 and
// grid_resolution <= 201.
std::map<std::string, double> brute_force_posterior(const OutcomeTally &tally,
                                                    const MultiQubitNoiseModel &model,
                                                    int grid_resolution);

}  // namespace qmit

#endif  // QMIT_BAYES_HPP
