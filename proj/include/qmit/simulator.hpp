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

#ifndef QMIT_SIMULATOR_HPP
#define QMIT_SIMULATOR_HPP

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qmit/calibration.hpp"
#include "qmit/noise_model.hpp"
#include "qmit/tally.hpp"

namespace qmit {

// Gaussian readout channel of one qubit: the integrated signal conditioned on
// the prepared state is normal with mean mu0 or mu1 and shared width sigma.
// `threshold` is the binary assignment boundary; NaN selects the midpoint.
struct DetectorQubit {
  double mu0 = -1.0;
  double mu1 = 1.0;
  double sigma = 0.5;
  double threshold = std::numeric_limits<double>::quiet_NaN();

  double effective_threshold() const;
  void validate(int qubit) const;
};

struct DetectorSpec {
  std::vector<DetectorQubit> qubits;

  int n_qubits() const { return static_cast<int>(qubits.size()); }
  void validate() const;
};

// What to sample: a fixed true string, or a distribution over true strings.
struct ExperimentSpec {
  Mode mode = Mode::binary;
  std::string true_bits;  // exclusive with true_distribution
  std::vector<std::pair<std::string, double>> true_distribution;
  uint64_t n_shots = 0;
  uint64_t seed = 0;

  void validate(int n_qubits) const;
};

// Exact per-qubit confusion matrix of the detector's binary assignment,
// computed from the Gaussian CDF. This is the analytic ground truth the
// calibrated matrices are tested against.
SingleQubitConfusion true_confusion(const DetectorSpec &spec, int qubit);

// Draws shots from the detector. Shot s is a pure function of (seed, s), so
// output is identical for every thread count and shots can be regenerated
// individually. Binary mode thresholds each signal; analog mode emits it.
std::vector<ShotRecord> sample_shots(const ExperimentSpec &experiment, const DetectorSpec &spec,
                                     int threads = 1);

// Draws one calibration record: `n_shots` readout signals of `qubit` with the
// prepared state pinned. Binary mode stores assigned bits as 0.0 / 1.0
// samples; analog mode stores the raw signals. Uses an RNG stream disjoint
// from sample_shots so calibration and experiment data never share draws.
CalibrationRecord sample_calibration_record(const DetectorSpec &spec, int qubit,
                                            int prepared_state, uint64_t n_shots, uint64_t seed,
                                            Mode mode);

// Mass assigned to `target` by a population vector over `strings`; 0 when the
// target is not in the support.
double success_probability(const std::vector<std::string> &strings,
                           const std::vector<double> &populations, const std::string &target);

}  // namespace qmit

#endif  // QMIT_SIMULATOR_HPP
